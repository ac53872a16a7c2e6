#pragma once

#include "signet/graph.hpp"
#include "signet/spectra.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace signet {

struct FrustrationResult {
    double value = 0.0;
    Signature signature;
    bool exact = false;
    std::string method;  ///< "exhaustive" or "sign-iteration+greedy"
    int restarts_used = 0;
    /// Greedy-descent energies of the winning restart (strictly decreasing).
    std::vector<double> energy_trace;
};

/// Frustration energy of a fixed gauge,
///   (1/2) sum_{i != j} [ |Lnorm| + S Lnorm S ]_ij,
/// cross-checked against (n - s^T ((H + H^T)/2) s) / 2.
double energy(const SignedGraph& g, const Signature& s);

constexpr int kExhaustiveCap = 24;

/// Global minimum over the 2^(n-1) gauges with s_0 = +1; ties resolved to
/// the lexicographically smallest signature (-1 < +1).
FrustrationResult frustration_exact(const SignedGraph& g, int cap = kExhaustiveCap);

struct HeuristicOptions {
    int restarts = 50;
    std::uint64_t seed = 0;
    int max_sign_iterations = 200;
};

/// Synchronous sign iteration u <- sign(((H + H^T)/2) u) to a fixed point,
/// then greedy single-flip descent, best over restarts. Restart 0 starts
/// from the sign pattern of the leading eigenvector of H_s.
FrustrationResult frustration_heuristic(const SignedGraph& g, const HeuristicOptions& opts = {});

/// Exact below the cap, heuristic above it.
FrustrationResult frustration_auto(const SignedGraph& g, const HeuristicOptions& opts = {},
                                   int cap = kExhaustiveCap);

struct BoundReport {
    double pi1 = 1.0;
    double pi2 = 0.0;
    double frustration_ceiling = 0.0;  ///< n / (n - 2 eps)
    double upper = 0.0;                ///< min(ceiling, pi2)
    double lower = 1.0;
    bool holds = false;
    bool symmetric_L = false;  ///< Delta = delta I, where the bound is proven
    bool exact_frustration = false;
};

/// 1 <= pi1 <= min{ n / (n - 2 eps), pi2 }.
BoundReport check_pi1_bounds(const SignedGraph& g, const FrustrationResult& eps, double tol = 1e-8);
BoundReport check_pi1_bounds(const SignedGraph& g, const SpectralSummary& spectrum, const FrustrationResult& eps,
                             double tol = 1e-8);

}  // namespace signet
