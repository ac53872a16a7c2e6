#pragma once

#include "signet/frustration.hpp"
#include "signet/graph.hpp"
#include "signet/nonlinearity.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <string>
#include <vector>

namespace signet {

/// xdot = Delta [ -x + pi H psi(x) ] with the operators precomputed.
class CtSystem {
public:
    CtSystem(const SignedGraph& g, const NonlinearityProfile& psi, double pi);

    int n() const noexcept { return static_cast<int>(degrees_.size()); }
    double pi() const noexcept { return pi_; }
    const SignedGraph& graph() const noexcept { return *graph_; }
    const NonlinearityProfile& profile() const noexcept { return *psi_; }

    /// -x + pi H psi(x); its zeros are the equilibria.
    void phi(const Vector& x, Vector& out) const;
    /// -Delta x + pi A psi(x).
    void field(const Vector& x, Vector& out) const;
    /// -I + pi H diag(psi'(x)).
    Matrix phi_jacobian(const Vector& x) const;

    const Vector& degrees() const noexcept { return degrees_; }
    const Matrix& interaction() const noexcept { return interaction_; }

private:
    const SignedGraph* graph_;
    const NonlinearityProfile* psi_;
    double pi_;
    Matrix weights_;
    Matrix interaction_;
    Vector degrees_;
    mutable Vector scratch_;
};

/// Evaluates both the normalized form and -Delta x + pi A psi(x) and
/// throws FormulaMismatch if they disagree beyond 1e-12 (scaled).
Vector vector_field(const SignedGraph& g, const NonlinearityProfile& psi, double pi, const Vector& x);

/// J(x) = -Delta (I - pi H diag(psi'(x))).
Matrix jacobian(const SignedGraph& g, const NonlinearityProfile& psi, double pi, const Vector& x);

struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    double pi = 0.0;
    double step = 0.0;
    std::string method;
    bool converged = false;  ///< early stop on ||f||_inf < stop_tol
    long steps = 0;
    const Vector& terminal() const { return states.back(); }
};

struct IntegrateOptions {
    double horizon = 100.0;
    double step = 0.01;
    double stop_tol = 0.0;     ///< <= 0 disables the early stop
    bool adaptive = false;     ///< step-doubling refinement when the local error exceeds local_tol
    double local_tol = 1e-10;
    int record_every = 1;      ///< 0 keeps only the initial and terminal states
};

/// Classic fourth-order Runge-Kutta.
Trajectory integrate(const SignedGraph& g, const NonlinearityProfile& psi, double pi, const Vector& x0,
                     const IntegrateOptions& opts = {});
Trajectory integrate(const CtSystem& sys, const Vector& x0, const IntegrateOptions& opts = {});

enum class Stability { Stable, Unstable, Marginal };
std::string_view to_string(Stability s) noexcept;

struct StabilityResult {
    Stability kind = Stability::Marginal;
    double leading = 0.0;  ///< pi * lambda_n(Psi^1/2 H_s Psi^1/2); stable iff < 1
};

/// Stable iff pi lambda_n(Psi'^1/2 H_s Psi'^1/2) < 1 - margin.
StabilityResult classify_stability(const SignedGraph& g, const NonlinearityProfile& psi, double pi, const Vector& x,
                                   double margin = 1e-8);

struct EquilibriumRecord {
    Vector state;
    double residual = 0.0;  ///< ||f(x*)||_inf
    Stability stability = Stability::Marginal;
    double leading = 0.0;
    bool is_origin = false;
};

struct EquilibriumSet {
    double pi = 0.0;
    std::vector<EquilibriumRecord> records;
    int seeds_used = 0;
    double converged_fraction = 0.0;
    int nontrivial_count() const;
};

struct FindOptions {
    int n_seeds = 50;
    std::uint64_t seed = 0;
    std::vector<Vector> warm_starts;
    double newton_tol = 1e-10;  ///< on ||f||_inf
    int max_newton = 100;
    int max_backtracks = 30;
    double dedup_radius = 1e-5;
    /// Seeds along the leading eigenvectors of H (the directions in which the
    /// origin bifurcates), at each listed amplitude and both signs.
    int spectral_directions = 3;
    std::vector<double> spectral_amplitudes = {0.05, 0.3, 1.0, 3.0};
    double stability_margin = 1e-8;
};

/// Damped Newton on -x + pi H psi(x) = 0 from the origin, warm starts,
/// spectral seeds and uniform seeds in the ball ||x||_1 <= pi n; results
/// are deduplicated and closed under x -> -x.
EquilibriumSet find_equilibria(const SignedGraph& g, const NonlinearityProfile& psi, double pi,
                               const FindOptions& opts = {});

/// Newton from a single starting point; empty optional when it fails.
std::optional<Vector> newton_solve(const CtSystem& sys, const Vector& x0, const FindOptions& opts = {});

/// V(x) = sum_i int_0^{x_i} psi_i(s) ds.
double lyapunov_value(const NonlinearityProfile& psi, const Vector& x);

struct NormBoundReport {
    double bound = 0.0;  ///< pi (n - 2 eps)
    double max_norm1 = 0.0;
    std::vector<bool> inside;
    bool all_inside = true;
    bool exact_frustration = false;
};

/// ||x*||_1 <= pi (n - 2 eps(G)) for every record.
NormBoundReport check_norm_bound(const SignedGraph& g, double pi, const std::vector<Vector>& equilibria,
                                 const FrustrationResult& eps, double tol = 1e-6);
NormBoundReport check_norm_bound(const SignedGraph& g, double pi, const EquilibriumSet& set,
                                 const FrustrationResult& eps, double tol = 1e-6);

}  // namespace signet
