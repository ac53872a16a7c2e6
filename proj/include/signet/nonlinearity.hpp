#pragma once

#include "signet/graph.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace signet {

enum class SigmoidKind {
    Tanh,      ///< tanh(x)
    Rational,  ///< x / (1 + |x|^a)^(1/a), shape a >= 1
    Custom,    ///< user-supplied closures, unchecked until validated
};

struct CustomSigmoid {
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
    std::function<double(double)> inverse;
};

/// One scalar saturating map psi with psi', psi'' and psi^-1.
class Sigmoid {
public:
    static Sigmoid tanh();
    static Sigmoid rational(double shape);
    static Sigmoid custom(std::string name, CustomSigmoid fns);

    double operator()(double x) const;
    double d1(double x) const;
    double d2(double x) const;
    /// Defined on (-1, 1).
    double inverse(double y) const;
    /// Integral of psi from 0 to x (closed form where known, quadrature otherwise).
    double primitive(double x) const;

    SigmoidKind kind() const noexcept { return kind_; }
    double shape() const noexcept { return shape_; }
    const std::string& name() const noexcept { return name_; }

private:
    Sigmoid(SigmoidKind kind, double shape, std::string name);

    SigmoidKind kind_;
    double shape_ = 1.0;
    std::string name_;
    std::shared_ptr<const CustomSigmoid> custom_;
};

/// Per-agent nonlinearities; homogeneous profiles take a fast path.
class NonlinearityProfile {
public:
    NonlinearityProfile(Sigmoid shared, int n);
    explicit NonlinearityProfile(std::vector<Sigmoid> per_agent);

    int n() const noexcept { return n_; }
    bool homogeneous() const noexcept { return agents_.size() == 1; }
    const Sigmoid& agent(int i) const { return agents_[homogeneous() ? 0 : i]; }

    Vector apply(const Vector& x) const;
    Vector d1(const Vector& x) const;
    Vector d2(const Vector& x) const;
    Vector inverse(const Vector& y) const;

    void apply_into(const Vector& x, Vector& out) const;
    void d1_into(const Vector& x, Vector& out) const;

private:
    std::vector<Sigmoid> agents_;
    int n_;
};

/// kind: "tanh" or "rational"; params: empty, or {shape} for rational.
NonlinearityProfile make_profile(const std::string& kind, const std::vector<double>& params, int n);

struct GridSpec {
    double half_width = 10.0;
    int points = 2001;
};

struct AssumptionCheck {
    bool passed = true;
    double worst = 0.0;  ///< worst violation measure on the grid
    std::string detail;
};

struct ProfileReport {
    AssumptionCheck odd;         // psi(-x) = -psi(x)
    AssumptionCheck monotone;    // psi' > 0 and psi'(0) = 1
    AssumptionCheck saturated;   // |psi| < 1, psi -> +-1
    AssumptionCheck sigmoidal;   // psi'' < 0 on x > 0, > 0 on x < 0
    AssumptionCheck derivative;  // psi', psi'' against central differences
    AssumptionCheck inverse;     // psi^-1(psi(x)) = x
    bool all_passed() const {
        return odd.passed && monotone.passed && saturated.passed && sigmoidal.passed && derivative.passed &&
               inverse.passed;
    }
};

ProfileReport validate_sigmoid(const Sigmoid& s, const GridSpec& grid = {});

/// Validates every distinct agent map; the report merges agent results.
ProfileReport validate_profile(const NonlinearityProfile& p, const GridSpec& grid = {});

}  // namespace signet
