#include "signet/sweep.hpp"

#include "signet/error.hpp"
#include "signet/parallel.hpp"
#include "signet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace signet {

namespace {

double inf_dist(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Orientation-free distance between the orbits {a, -a} and {b, -b}.
double orbit_dist(const Vector& a, const Vector& b) { return std::min(inf_dist(a, b), (a + b).cwiseAbs().maxCoeff()); }

void check_grid(const std::vector<double>& grid, const char* op) {
    if (grid.empty()) throw Error(ErrorCode::BadArgument, op, "empty grid");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] > 0.0) || !std::isfinite(grid[k]))
            throw Error(ErrorCode::BadArgument, op, "grid values must be positive and finite");
        if (k > 0 && !(grid[k] > grid[k - 1])) throw Error(ErrorCode::BadArgument, op, "grid must be increasing");
    }
}

BranchRecord ct_record(const EquilibriumRecord& rec) {
    BranchRecord b;
    b.state = rec.state;
    b.norm1 = rec.state.cwiseAbs().sum();
    b.norm2 = rec.state.norm();
    b.stability = std::string(to_string(rec.stability));
    b.kind = "equilibrium";
    return b;
}

// Adds the records of `extra` that are not already in `cell` (within radius).
void merge_records(std::vector<BranchRecord>& cell, const std::vector<BranchRecord>& extra, double radius) {
    for (const auto& e : extra) {
        const bool known = std::any_of(cell.begin(), cell.end(), [&](const BranchRecord& r) {
            return r.kind == e.kind && inf_dist(r.state, e.state) <= radius;
        });
        if (!known) cell.push_back(e);
    }
}

void sort_cell(std::vector<BranchRecord>& recs) {
    std::stable_sort(recs.begin(), recs.end(), [](const BranchRecord& a, const BranchRecord& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
        for (Eigen::Index i = 0; i < a.state.size(); ++i)
            if (a.state(i) != b.state(i)) return a.state(i) < b.state(i);
        return false;
    });
}

// Branch ids: the origin is 0; each {x, -x} orbit is matched to the nearest
// orbit of the previous cell of the same kind, otherwise it opens a new id.
int assign_branches(std::vector<SweepCell>& cells, double match_radius, double zero_tol) {
    int next_id = 1;
    std::vector<BranchRecord> prev;
    for (auto& cell : cells) {
        std::vector<BranchRecord> reps;  // one per branch id assigned in this cell
        std::vector<bool> taken(prev.size(), false);
        for (auto& rec : cell.records) {
            if (rec.kind != "period2" && rec.state.cwiseAbs().maxCoeff() <= zero_tol) {
                rec.branch = 0;
                continue;
            }
            // Same orbit as a record already labelled in this cell?
            int same = -1;
            for (const auto& r : reps)
                if (r.kind == rec.kind && orbit_dist(r.state, rec.state) <= 1e-9 * std::max(1.0, rec.norm1)) {
                    same = r.branch;
                    break;
                }
            if (same < 0 && rec.kind == "period2") {
                for (const auto& r : reps)
                    if (r.kind == rec.kind && std::abs(r.amplitude - rec.amplitude) <= 1e-6 &&
                        std::abs(r.norm2 - rec.norm2) <= 1e-6) {
                        same = r.branch;
                        break;
                    }
            }
            if (same >= 0) {
                rec.branch = same;
                continue;
            }
            int best = -1;
            double best_d = match_radius;
            for (std::size_t p = 0; p < prev.size(); ++p) {
                if (taken[p] || prev[p].kind != rec.kind || prev[p].branch == 0) continue;
                const double d = orbit_dist(prev[p].state, rec.state);
                if (d <= best_d) {
                    best_d = d;
                    best = static_cast<int>(p);
                }
            }
            if (best >= 0) {
                taken[best] = true;
                rec.branch = prev[best].branch;
            } else {
                rec.branch = next_id++;
            }
            reps.push_back(rec);
        }
        prev = reps;
    }
    return next_id;
}

std::vector<Vector> dt_starts(const SignedGraph& g, int random_count, std::uint64_t seed) {
    const int n = g.n();
    std::vector<Vector> starts;
    // Leading and trailing eigenvectors of H: the directions that destabilize
    // first through a pitchfork and through period doubling respectively.
    const Vector inv_sqrt = g.degrees().cwiseSqrt().cwiseInverse();
    Matrix hs = inv_sqrt.asDiagonal() * g.weights() * inv_sqrt.asDiagonal();
    hs = (0.5 * (hs + hs.transpose())).eval();
    const EigenDecomposition eig = eigh(hs);
    for (int k : {n - 1, n - 2, 0}) {
        Vector v = inv_sqrt.cwiseProduct(eig.vectors.col(k));
        v /= v.cwiseAbs().maxCoeff();
        starts.push_back(0.1 * v);
        starts.push_back(-0.1 * v);
    }
    Rng rng(seed);
    for (int s = 0; s < random_count; ++s) {
        Vector x(n);
        for (int i = 0; i < n; ++i) x(i) = rng.uniform(-1.0, 1.0);
        starts.push_back(x);
    }
    return starts;
}

std::vector<BranchRecord> dt_cell(const DtMap& map, const std::vector<Vector>& starts, const SweepOptions& opts,
                                  int& undecided) {
    std::vector<BranchRecord> out;
    const double radius = 1e-4;
    for (const Vector& x0 : starts) {
        const DtOutcome o = simulate(map, x0, opts.simulate);
        if (o.kind == DtKind::Undecided) {
            ++undecided;
            continue;
        }
        std::vector<BranchRecord> found;
        BranchRecord b;
        b.state = o.state;
        if (o.kind == DtKind::FixedPoint && !o.nonzero(opts.zero_tol)) b.state.setZero();
        b.norm1 = b.state.cwiseAbs().sum();
        b.norm2 = b.state.norm();
        b.stability = "attracting";
        b.kind = o.kind == DtKind::FixedPoint ? "fixed_point" : "period2";
        b.amplitude = o.amplitude();
        found.push_back(b);
        if (o.kind == DtKind::FixedPoint) {
            BranchRecord m = b;
            m.state = -b.state;
            found.push_back(m);
        } else {
            // The partner iterate and the mirrored cycle.
            BranchRecord partner = b;
            partner.state = o.state_odd;
            partner.norm1 = o.state_odd.cwiseAbs().sum();
            partner.norm2 = o.state_odd.norm();
            found.push_back(partner);
            BranchRecord m1 = b, m2 = partner;
            m1.state = -b.state;
            m2.state = -partner.state;
            found.push_back(m1);
            found.push_back(m2);
        }
        for (const auto& f : found) {
            const bool known = std::any_of(out.begin(), out.end(), [&](const BranchRecord& r) {
                return r.kind == f.kind && inf_dist(r.state, f.state) <= radius;
            });
            if (!known) out.push_back(f);
        }
    }
    return out;
}

}  // namespace

std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) throw Error(ErrorCode::BadArgument, "sweep.make_grid", "need step > 0, hi >= lo");
    std::vector<double> grid;
    const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-6)) + 1;
    grid.reserve(count);
    for (long k = 0; k < count; ++k) grid.push_back(lo + k * step);
    return grid;
}

int SweepCell::nontrivial_count() const {
    return static_cast<int>(std::count_if(records.begin(), records.end(), [](const BranchRecord& r) {
        return r.kind != "period2" && r.branch != 0;
    }));
}

bool SweepCell::has_cycle() const {
    return std::any_of(records.begin(), records.end(), [](const BranchRecord& r) { return r.kind == "period2"; });
}

SweepResult sweep_ct(const SignedGraph& g, const NonlinearityProfile& psi, const std::vector<double>& grid,
                     const SweepOptions& opts) {
    constexpr const char* op = "sweep.sweep_ct";
    check_grid(grid, op);
    SweepResult res;
    res.mode = "ct";
    res.grid = grid;
    res.thresholds = thresholds(g);
    res.cells.resize(grid.size());

    const int count = static_cast<int>(grid.size());
    parallel_for(count, opts.jobs, [&](int k) {
        FindOptions f = opts.find;
        f.n_seeds = opts.seeds_per_point;
        f.seed = derive_seed(opts.seed, static_cast<std::uint64_t>(k));
        f.warm_starts.clear();
        const EquilibriumSet set = find_equilibria(g, psi, grid[k], f);
        SweepCell& cell = res.cells[k];
        cell.pi = grid[k];
        for (const auto& rec : set.records) cell.records.push_back(ct_record(rec));
    });

    if (opts.warm_pass) {
        for (int k = 1; k < count; ++k) {
            FindOptions f = opts.find;
            f.n_seeds = 0;
            f.spectral_directions = 0;
            f.warm_starts.clear();
            for (const auto& r : res.cells[k - 1].records)
                if (r.state.cwiseAbs().maxCoeff() > opts.zero_tol) f.warm_starts.push_back(r.state);
            if (f.warm_starts.empty()) continue;
            const EquilibriumSet set = find_equilibria(g, psi, grid[k], f);
            std::vector<BranchRecord> extra;
            for (const auto& rec : set.records) extra.push_back(ct_record(rec));
            merge_records(res.cells[k].records, extra, f.dedup_radius);
        }
    }
    for (auto& cell : res.cells) sort_cell(cell.records);
    res.branch_count = assign_branches(res.cells, opts.match_radius, opts.zero_tol);
    return res;
}

SweepResult sweep_dt(const SignedGraph& g, const NonlinearityProfile& psi, const std::vector<double>& grid,
                     double step_size, const SweepOptions& opts) {
    constexpr const char* op = "sweep.sweep_dt";
    check_grid(grid, op);
    if (!(step_size > 0.0)) throw Error(ErrorCode::BadArgument, op, "step size must be positive");
    SweepResult res;
    res.mode = "dt";
    res.grid = grid;
    res.step_size = step_size;
    res.thresholds = thresholds(g, step_size);
    res.cells.resize(grid.size());

    const int count = static_cast<int>(grid.size());
    parallel_for(count, opts.jobs, [&](int k) {
        const DtMap map(g, psi, grid[k], step_size);
        const auto starts = dt_starts(g, opts.seeds_per_point, derive_seed(opts.seed, static_cast<std::uint64_t>(k)));
        SweepCell& cell = res.cells[k];
        cell.pi = grid[k];
        cell.records = dt_cell(map, starts, opts, cell.undecided);
    });

    if (opts.warm_pass) {
        for (int k = 1; k < count; ++k) {
            std::vector<Vector> starts;
            for (const auto& r : res.cells[k - 1].records)
                if (r.state.cwiseAbs().maxCoeff() > opts.zero_tol) starts.push_back(r.state);
            if (starts.empty()) continue;
            const DtMap map(g, psi, grid[k], step_size);
            int undecided = 0;
            const auto extra = dt_cell(map, starts, opts, undecided);
            merge_records(res.cells[k].records, extra, 1e-4);
        }
    }

    const double grid_tol = grid.size() > 1 ? (grid.back() - grid.front()) / (grid.size() - 1) : 0.0;
    for (auto& cell : res.cells) {
        sort_cell(cell.records);
        for (const auto& r : cell.records) {
            DtOutcome o;
            o.kind = r.kind == "period2" ? DtKind::Period2 : DtKind::FixedPoint;
            o.state = r.state;
            o.pi = cell.pi;
            o.step_size = step_size;
            o.regime = step_regime(g, step_size);
            const NecessaryConditionCheck c = check_necessary_conditions(o, res.thresholds, grid_tol, opts.zero_tol);
            if (!c.fixed_point_ok) res.violations.push_back({cell.pi, "nonzero fixed point below pi1"});
            if (!c.period2_ok) res.violations.push_back({cell.pi, "period-2 below pi1d"});
        }
    }
    res.branch_count = assign_branches(res.cells, opts.match_radius, opts.zero_tol);
    return res;
}

Onset estimate_onset(const SweepResult& r, OnsetKind which) {
    constexpr const char* op = "sweep.estimate_onset";
    auto holds = [&](const SweepCell& c) {
        switch (which) {
            case OnsetKind::Nontrivial: return c.nontrivial_count() > 0;
            case OnsetKind::Multi: return c.state_count() - static_cast<int>(std::count_if(
                                              c.records.begin(), c.records.end(),
                                              [](const BranchRecord& b) { return b.kind == "period2"; })) > 3;
            case OnsetKind::Cycle: return c.has_cycle();
        }
        return false;
    };
    for (std::size_t k = 1; k < r.cells.size(); ++k) {
        if (holds(r.cells[k]) && !holds(r.cells[k - 1])) {
            Onset o;
            o.lo = r.cells[k - 1].pi;
            o.hi = r.cells[k].pi;
            o.value = 0.5 * (o.lo + o.hi);
            o.half_width = 0.5 * (o.hi - o.lo);
            return o;
        }
    }
    throw Error(ErrorCode::NoTransition, op, "sweep contains no transition of the requested kind");
}

}  // namespace signet
