#pragma once

#include "signet/dynamics_ct.hpp"
#include "signet/dynamics_dt.hpp"
#include "signet/spectra.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace signet {

/// Evenly spaced grid lo, lo+step, ..., up to hi (inclusive within step/1e6).
std::vector<double> make_grid(double lo, double hi, double step);

struct BranchRecord {
    int branch = 0;         ///< x and -x share an id; the origin is branch 0
    Vector state;           ///< fixed point, or x_even for a cycle
    double norm1 = 0.0;
    double norm2 = 0.0;
    std::string stability;  ///< stable | unstable | marginal (CT), attracting (DT)
    std::string kind;       ///< equilibrium | fixed_point | period2
    double amplitude = 0.0; ///< ||x_even - x_odd||_inf / 2 for cycles
};

struct SweepCell {
    double pi = 0.0;
    std::vector<BranchRecord> records;
    int undecided = 0;  ///< DT runs that neither settled nor cycled

    int state_count() const { return static_cast<int>(records.size()); }
    int nontrivial_count() const;
    bool has_cycle() const;
};

struct ConditionViolation {
    double pi = 0.0;
    std::string what;  ///< "nonzero fixed point below pi1" | "period-2 below pi1d"
};

struct SweepResult {
    std::string mode;  ///< ct | dt
    std::vector<double> grid;
    std::vector<SweepCell> cells;
    SpectralSummary thresholds;
    std::optional<double> step_size;
    std::vector<ConditionViolation> violations;
    int branch_count = 0;
};

struct SweepOptions {
    int seeds_per_point = 10;
    std::uint64_t seed = 0;
    int jobs = 1;
    /// Two representatives closer than this (infinity norm, up to sign)
    /// continue the same branch across neighbouring cells.
    double match_radius = 0.25;
    bool warm_pass = true;
    FindOptions find;           ///< n_seeds and seed are overridden per cell
    SimulateOptions simulate;   ///< DT only
    double zero_tol = 1e-6;
};

SweepResult sweep_ct(const SignedGraph& g, const NonlinearityProfile& psi, const std::vector<double>& grid,
                     const SweepOptions& opts = {});

SweepResult sweep_dt(const SignedGraph& g, const NonlinearityProfile& psi, const std::vector<double>& grid,
                     double step_size, const SweepOptions& opts = {});

enum class OnsetKind { Nontrivial, Multi, Cycle };

struct Onset {
    double value = 0.0;       ///< midpoint of the bracketing cell
    double half_width = 0.0;  ///< the onset lies within value +- half_width
    double lo = 0.0;
    double hi = 0.0;
};

/// First grid cell where the requested condition switches from false to
/// true: nontrivial = any nonzero state, multi = more than three states,
/// cycle = any period-2 record.
Onset estimate_onset(const SweepResult& r, OnsetKind which);

}  // namespace signet
