#include "signet/nonlinearity.hpp"

#include "signet/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace signet {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Adaptive Simpson on [a, b]; used for primitives without a closed form.
double simpson_step(const Sigmoid& s, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = s(lm);
    const double frm = s(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return simpson_step(s, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(s, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_psi(const Sigmoid& s, double x) {
    if (x == 0.0) return 0.0;
    const double a = 0.0;
    const double b = std::abs(x);
    const double fa = s(a);
    const double fb = s(b);
    const double fm = s(0.5 * b);
    const double whole = b / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(s, a, b, fa, fm, fb, whole, 1e-13 * std::max(1.0, b), 50);
}

}  // namespace

Sigmoid::Sigmoid(SigmoidKind kind, double shape, std::string name)
    : kind_(kind), shape_(shape), name_(std::move(name)) {}

Sigmoid Sigmoid::tanh() { return Sigmoid(SigmoidKind::Tanh, 1.0, "tanh"); }

Sigmoid Sigmoid::rational(double shape) {
    if (!(shape >= 1.0) || !std::isfinite(shape))
        throw Error(ErrorCode::BadArgument, "nonlinearity.make_profile", "rational shape must be finite and >= 1");
    std::ostringstream name;
    name << "rational(" << shape << ")";
    return Sigmoid(SigmoidKind::Rational, shape, name.str());
}

Sigmoid Sigmoid::custom(std::string name, CustomSigmoid fns) {
    if (!fns.value || !fns.d1 || !fns.d2 || !fns.inverse)
        throw Error(ErrorCode::BadArgument, "nonlinearity.custom", "value, d1, d2 and inverse are all required");
    Sigmoid s(SigmoidKind::Custom, 1.0, std::move(name));
    s.custom_ = std::make_shared<const CustomSigmoid>(std::move(fns));
    return s;
}

double Sigmoid::operator()(double x) const {
    switch (kind_) {
        case SigmoidKind::Tanh: return std::tanh(x);
        case SigmoidKind::Rational: {
            const double ax = std::abs(x);
            // Past |x| = 1 divide through by |x| so rounding cannot push |psi| to 1 or above.
            if (ax > 1.0) return std::copysign(1.0 / std::pow(1.0 + std::pow(ax, -shape_), 1.0 / shape_), x);
            return x / std::pow(1.0 + std::pow(ax, shape_), 1.0 / shape_);
        }
        case SigmoidKind::Custom: return custom_->value(x);
    }
    return 0.0;
}

double Sigmoid::d1(double x) const {
    switch (kind_) {
        case SigmoidKind::Tanh: {
            const double c = std::cosh(x);
            return 1.0 / (c * c);
        }
        case SigmoidKind::Rational: {
            const double ax = std::abs(x);
            return std::pow(1.0 + std::pow(ax, shape_), -1.0 / shape_ - 1.0);
        }
        case SigmoidKind::Custom: return custom_->d1(x);
    }
    return 0.0;
}

double Sigmoid::d2(double x) const {
    switch (kind_) {
        case SigmoidKind::Tanh: {
            const double c = std::cosh(x);
            return -2.0 * std::tanh(x) / (c * c);
        }
        case SigmoidKind::Rational: {
            if (x == 0.0) return 0.0;
            const double ax = std::abs(x);
            const double a = shape_;
            const double mag = (a + 1.0) * std::pow(ax, a - 1.0) * std::pow(1.0 + std::pow(ax, a), -1.0 / a - 2.0);
            return x > 0.0 ? -mag : mag;
        }
        case SigmoidKind::Custom: return custom_->d2(x);
    }
    return 0.0;
}

double Sigmoid::inverse(double y) const {
    if (!(std::abs(y) < 1.0))
        throw Error(ErrorCode::BadArgument, "nonlinearity.inverse", "argument must lie in (-1, 1)");
    switch (kind_) {
        case SigmoidKind::Tanh: return std::atanh(y);
        case SigmoidKind::Rational: {
            const double ay = std::abs(y);
            return y / std::pow(1.0 - std::pow(ay, shape_), 1.0 / shape_);
        }
        case SigmoidKind::Custom: return custom_->inverse(y);
    }
    return 0.0;
}

double Sigmoid::primitive(double x) const {
    const double ax = std::abs(x);
    switch (kind_) {
        case SigmoidKind::Tanh:
            // log cosh x without overflow
            return ax + std::log1p(std::exp(-2.0 * ax)) - kLn2;
        case SigmoidKind::Rational:
            if (shape_ == 1.0) return ax - std::log1p(ax);
            if (shape_ == 2.0) return ax * ax / (std::sqrt(1.0 + ax * ax) + 1.0);
            return integrate_psi(*this, ax);
        case SigmoidKind::Custom: return integrate_psi(*this, ax);
    }
    return 0.0;
}

NonlinearityProfile::NonlinearityProfile(Sigmoid shared, int n) : agents_{std::move(shared)}, n_(n) {
    if (n < 1) throw Error(ErrorCode::BadArgument, "nonlinearity.make_profile", "n must be >= 1");
}

NonlinearityProfile::NonlinearityProfile(std::vector<Sigmoid> per_agent)
    : agents_(std::move(per_agent)), n_(static_cast<int>(agents_.size())) {
    if (agents_.empty()) throw Error(ErrorCode::BadArgument, "nonlinearity.make_profile", "empty profile");
    if (agents_.size() == 1) n_ = 1;
}

void NonlinearityProfile::apply_into(const Vector& x, Vector& out) const {
    if (homogeneous() && agents_[0].kind() == SigmoidKind::Tanh) {
        out = x.array().tanh().matrix();
        return;
    }
    out.resize(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = agent(static_cast<int>(i))(x(i));
}

void NonlinearityProfile::d1_into(const Vector& x, Vector& out) const {
    if (homogeneous() && agents_[0].kind() == SigmoidKind::Tanh) {
        out = x.array().cosh().square().inverse().matrix();
        return;
    }
    out.resize(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = agent(static_cast<int>(i)).d1(x(i));
}

Vector NonlinearityProfile::apply(const Vector& x) const {
    Vector out;
    apply_into(x, out);
    return out;
}

Vector NonlinearityProfile::d1(const Vector& x) const {
    Vector out;
    d1_into(x, out);
    return out;
}

Vector NonlinearityProfile::d2(const Vector& x) const {
    Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = agent(static_cast<int>(i)).d2(x(i));
    return out;
}

Vector NonlinearityProfile::inverse(const Vector& y) const {
    Vector out(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) out(i) = agent(static_cast<int>(i)).inverse(y(i));
    return out;
}

NonlinearityProfile make_profile(const std::string& kind, const std::vector<double>& params, int n) {
    constexpr const char* op = "nonlinearity.make_profile";
    for (double p : params)
        if (!std::isfinite(p)) throw Error(ErrorCode::BadArgument, op, "non-finite parameter");
    if (kind == "tanh") {
        if (!params.empty()) throw Error(ErrorCode::BadArgument, op, "tanh takes no parameters");
        return NonlinearityProfile(Sigmoid::tanh(), n);
    }
    if (kind == "rational") {
        if (params.size() > 1) throw Error(ErrorCode::BadArgument, op, "rational takes at most one parameter (shape)");
        return NonlinearityProfile(Sigmoid::rational(params.empty() ? 1.0 : params[0]), n);
    }
    throw Error(ErrorCode::UnknownKind, op, "unknown nonlinearity kind '" + kind + "'");
}

ProfileReport validate_sigmoid(const Sigmoid& s, const GridSpec& grid) {
    if (grid.points < 3 || !(grid.half_width > 0.0))
        throw Error(ErrorCode::BadArgument, "nonlinearity.validate_profile", "grid needs >= 3 points and positive width");
    ProfileReport r;
    auto fail = [](AssumptionCheck& c, double worst, const std::string& detail) {
        c.passed = false;
        c.worst = std::max(c.worst, worst);
        if (c.detail.empty()) c.detail = detail;
    };
    auto at = [](double x) {
        std::ostringstream os;
        os << " at x=" << x;
        return os.str();
    };

    const double slope0 = s.d1(0.0);
    if (std::abs(slope0 - 1.0) > 1e-12) fail(r.monotone, std::abs(slope0 - 1.0), "psi'(0) != 1");

    for (int k = 0; k < grid.points; ++k) {
        const double x = -grid.half_width + 2.0 * grid.half_width * k / (grid.points - 1);
        const double fx = s(x);
        const double odd_err = std::abs(fx + s(-x));
        r.odd.worst = std::max(r.odd.worst, odd_err);
        if (odd_err > 1e-12) fail(r.odd, odd_err, "psi(-x) != -psi(x)" + at(x));

        const double d1 = s.d1(x);
        if (!(d1 > 0.0)) fail(r.monotone, -d1, "psi' <= 0" + at(x));

        if (!(std::abs(fx) < 1.0)) fail(r.saturated, std::abs(fx) - 1.0, "|psi| >= 1" + at(x));

        const double d2 = s.d2(x);
        if (x > 0.0 && !(d2 < 0.0)) fail(r.sigmoidal, d2, "psi'' >= 0 for x > 0" + at(x));
        if (x < 0.0 && !(d2 > 0.0)) fail(r.sigmoidal, -d2, "psi'' <= 0 for x < 0" + at(x));

        const double h = 1e-5 * std::max(1.0, std::abs(x));
        // psi' may have a kink at the origin (rational shape 1); skip a small neighbourhood.
        if (std::abs(x) > 1e-3) {
            const double fd1 = (s(x + h) - s(x - h)) / (2.0 * h);
            const double e1 = std::abs(fd1 - d1) / std::max(std::abs(d1), 1e-3);
            r.derivative.worst = std::max(r.derivative.worst, e1);
            if (e1 > 1e-6) fail(r.derivative, e1, "psi' disagrees with central difference" + at(x));
            const double fd2 = (s.d1(x + h) - s.d1(x - h)) / (2.0 * h);
            const double e2 = std::abs(fd2 - d2) / std::max(std::abs(d2), 1e-3);
            r.derivative.worst = std::max(r.derivative.worst, e2);
            if (e2 > 1e-6) fail(r.derivative, e2, "psi'' disagrees with central difference" + at(x));
        }

        if (std::abs(fx) < 1.0 - 1e-6) {
            const double back = s.inverse(fx);
            const double e = std::abs(back - x) / std::max(1.0, std::abs(x));
            r.inverse.worst = std::max(r.inverse.worst, e);
            if (e > 1e-8) fail(r.inverse, e, "psi^-1(psi(x)) != x" + at(x));
        }
    }

    // Limits at +-infinity, probed far outside the grid.
    for (double far : {1e8, -1e8}) {
        const double fx = s(far);
        const double gap = std::abs(fx - (far > 0 ? 1.0 : -1.0));
        if (gap > 1e-6 || std::abs(fx) > 1.0) fail(r.saturated, gap, "psi does not saturate at +-1" + at(far));
    }
    return r;
}

ProfileReport validate_profile(const NonlinearityProfile& p, const GridSpec& grid) {
    const int agents = p.homogeneous() ? 1 : p.n();
    ProfileReport merged = validate_sigmoid(p.agent(0), grid);
    for (int i = 1; i < agents; ++i) {
        const ProfileReport r = validate_sigmoid(p.agent(i), grid);
        auto merge = [](AssumptionCheck& into, const AssumptionCheck& from) {
            if (!from.passed && into.passed) into.detail = from.detail;
            into.passed = into.passed && from.passed;
            into.worst = std::max(into.worst, from.worst);
        };
        merge(merged.odd, r.odd);
        merge(merged.monotone, r.monotone);
        merge(merged.saturated, r.saturated);
        merge(merged.sigmoidal, r.sigmoidal);
        merge(merged.derivative, r.derivative);
        merge(merged.inverse, r.inverse);
    }
    return merged;
}

}  // namespace signet
