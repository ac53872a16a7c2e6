#pragma once

#include "signet/graph.hpp"
#include "signet/nonlinearity.hpp"
#include "signet/spectra.hpp"

#include <string_view>
#include <vector>

namespace signet {

/// Step-size regime of the Euler map relative to eps * max_i delta_i.
enum class StepRegime {
    Contractive,  ///< eps max delta <= 1: first-bifurcation classification applies
    Stable,       ///< 1 < eps max delta < 2: period-2 necessary condition still applies
    TooLarge,     ///< eps max delta >= 2
};

StepRegime step_regime(const SignedGraph& g, double step_size);

/// x_{k+1} = (I - eps Delta) x_k + eps pi A psi(x_k).
class DtMap {
public:
    DtMap(const SignedGraph& g, const NonlinearityProfile& psi, double pi, double step_size);

    void apply(const Vector& x, Vector& out) const;
    int n() const noexcept { return static_cast<int>(damping_.size()); }
    double pi() const noexcept { return pi_; }
    double step_size() const noexcept { return step_; }
    StepRegime regime() const noexcept { return regime_; }

private:
    const NonlinearityProfile* psi_;
    double pi_;
    double step_;
    StepRegime regime_;
    Vector damping_;  ///< 1 - eps delta_i
    Matrix coupling_; ///< eps pi A
    mutable Vector scratch_;
};

Vector step(const SignedGraph& g, const NonlinearityProfile& psi, double pi, double step_size, const Vector& x);

enum class DtKind { FixedPoint, Period2, Undecided };
std::string_view to_string(DtKind k) noexcept;

struct DtOutcome {
    DtKind kind = DtKind::Undecided;
    Vector state;      ///< fixed point, or x_even of the cycle
    Vector state_odd;  ///< partner iterate of the cycle (period2 only)
    long iterations = 0;
    double pi = 0.0;
    double step_size = 0.0;
    StepRegime regime = StepRegime::Contractive;
    /// (x_even - x_odd) / 2 in the infinity norm; 0 unless period2.
    double amplitude() const;
    bool nonzero(double zero_tol = 1e-6) const { return state.cwiseAbs().maxCoeff() > zero_tol; }
    std::vector<Vector> trajectory;  ///< filled only when recording
};

struct SimulateOptions {
    long max_iters = 100000;
    double tol = 1e-10;
    bool record = false;
    long confirm_window = 200;  ///< extra iterations used to confirm a detection
};

/// Iterates until a fixed point (||x_{k+1} - x_k|| <= tol) or a period-2
/// cycle (last four iterates: ||x_k - x_{k-2}||, ||x_{k-1} - x_{k-3}|| <= tol
/// and ||x_k - x_{k-1}|| > 10 tol) is detected and persists, within 10 tol,
/// over a further confirm_window iterations.
DtOutcome simulate(const SignedGraph& g, const NonlinearityProfile& psi, double pi, double step_size,
                   const Vector& x0, const SimulateOptions& opts = {});
DtOutcome simulate(const DtMap& map, const Vector& x0, const SimulateOptions& opts = {});

enum class FirstBifurcation { Pitchfork, PeriodDoubling, Degenerate };
std::string_view to_string(FirstBifurcation b) noexcept;

/// Pitchfork at pi1 when pi1 < pi1d, period doubling at pi1d when
/// pi1d < pi1, Degenerate when they coincide within tol.
FirstBifurcation classify_first_bifurcation(const SpectralSummary& s, double tol = 1e-9);

struct NecessaryConditionCheck {
    bool fixed_point_ok = true;  ///< nonzero fixed point only above pi1
    bool period2_ok = true;      ///< period-2 only above pi1d
};

/// Post-hoc check of an outcome against the necessary conditions for
/// nontrivial fixed points and period-2 orbits.
NecessaryConditionCheck check_necessary_conditions(const DtOutcome& out, const SpectralSummary& s,
                                                   double pi_tol = 0.0, double zero_tol = 1e-6);

}  // namespace signet
