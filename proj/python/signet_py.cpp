#include "signet/dynamics_ct.hpp"
#include "signet/dynamics_dt.hpp"
#include "signet/error.hpp"
#include "signet/frustration.hpp"
#include "signet/graph.hpp"
#include "signet/io.hpp"
#include "signet/nonlinearity.hpp"
#include "signet/spectra.hpp"
#include "signet/sweep.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace signet;

namespace {

py::object optional_float(const std::optional<double>& v) {
    return v ? py::object(py::float_(*v)) : py::object(py::none());
}

}  // namespace

PYBIND11_MODULE(_signet, m) {
    m.doc() = "Opinion dynamics on signed networks";

    static py::exception<Error> signet_error(m, "SignetError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object err = signet_error;
            py::object inst = err(e.what());
            inst.attr("code") = std::string(to_string(e.code()));
            inst.attr("op") = e.op();
            inst.attr("input_error") = is_input_error(e.code());
            PyErr_SetObject(signet_error.ptr(), inst.ptr());
        }
    });

    // graph
    py::class_<SignedGraph>(m, "SignedGraph")
        .def(py::init([](int n, const std::vector<std::tuple<int, int, double>>& edges) {
                 std::vector<Edge> es;
                 for (const auto& [i, j, w] : edges) es.push_back({i, j, w});
                 return build_graph(n, es);
             }),
             py::arg("n"), py::arg("edges"))
        .def_static("from_matrix", &graph_from_matrix, py::arg("weights"))
        .def_property_readonly("n", &SignedGraph::n)
        .def_property_readonly("weights", &SignedGraph::weights)
        .def_property_readonly("degrees", &SignedGraph::degrees)
        .def_property_readonly("max_degree", &SignedGraph::max_degree)
        .def_property_readonly("edges",
                               [](const SignedGraph& g) {
                                   std::vector<std::tuple<int, int, double>> out;
                                   for (const auto& e : g.edges()) out.emplace_back(e.i, e.j, e.weight);
                                   return out;
                               })
        .def("is_degree_regular", &SignedGraph::is_degree_regular, py::arg("rel_tol") = 1e-9)
        .def("__eq__", &SignedGraph::operator==)
        .def("__repr__", [](const SignedGraph& g) {
            return "<SignedGraph n=" + std::to_string(g.n()) + " edges=" + std::to_string(g.edge_count()) + ">";
        });

    m.def(
        "random_signed_graph",
        [](int n, double edge_prob, double negative_prob, double weight_low, double weight_high, std::uint64_t seed) {
            return random_signed_graph({.n = n,
                                        .edge_prob = edge_prob,
                                        .negative_prob = negative_prob,
                                        .weight_low = weight_low,
                                        .weight_high = weight_high,
                                        .seed = seed});
        },
        py::arg("n"), py::arg("edge_prob") = 0.5, py::arg("negative_prob") = 0.0, py::arg("weight_low") = 0.0,
        py::arg("weight_high") = 1.0, py::arg("seed") = 0);
    m.def("operators", [](const SignedGraph& g) {
        const OperatorBundle b = derive_operators(g);
        py::dict d;
        d["laplacian"] = b.laplacian;
        d["normalized_laplacian"] = b.normalized_laplacian;
        d["interaction"] = b.interaction;
        d["symmetrized_interaction"] = b.symmetrized_interaction;
        return d;
    });
    m.def("is_structurally_balanced", [](const SignedGraph& g) {
        const BalanceResult r = is_structurally_balanced(g);
        return py::make_tuple(r.balanced, r.signature ? py::cast(*r.signature) : py::none());
    });
    m.def("switch_graph", &switch_graph, py::arg("graph"), py::arg("signature"));
    m.def(
        "regularize_degrees",
        [](const SignedGraph& g, double target) { return regularize_degrees(g, {.target_degree = target}); },
        py::arg("graph"), py::arg("target_degree") = 1.0);
    m.def("load_graph", [](const std::string& path) { return load_graph(path).graph; }, py::arg("path"));
    m.def("graph_to_json", [](const SignedGraph& g) { return dump_json(graph_to_json(g)); });

    // spectra
    py::class_<SpectralSummary>(m, "SpectralSummary")
        .def_readonly("eigs", &SpectralSummary::eigs)
        .def_readonly("lambda1", &SpectralSummary::lambda1)
        .def_readonly("lambda2", &SpectralSummary::lambda2)
        .def_readonly("lambda_n", &SpectralSummary::lambda_n)
        .def_readonly("pi1", &SpectralSummary::pi1)
        .def_readonly("pi2", &SpectralSummary::pi2)
        .def_property_readonly("pi1d", [](const SpectralSummary& s) { return optional_float(s.pi1d); })
        .def_property_readonly("step_size", [](const SpectralSummary& s) { return optional_float(s.step_size); })
        .def_readonly("max_degree", &SpectralSummary::max_degree);
    m.def("thresholds", &thresholds, py::arg("graph"), py::arg("step_size") = py::none());
    m.def("thresholds_from_spectrum", &thresholds_from_spectrum, py::arg("eigs"));
    m.def("spectrum", &spectrum_of_normalized_laplacian, py::arg("graph"));
    m.def("solve_pi1d", [](const SignedGraph& g, double step) { return solve_pi1d(g, step); }, py::arg("graph"),
          py::arg("step_size"));
    m.def("eigvalsh", [](const Matrix& a) { return eigvalsh(a); }, py::arg("matrix"));

    // nonlinearity
    py::class_<NonlinearityProfile>(m, "Profile")
        .def(py::init([](const std::string& kind, const std::vector<double>& params, int n) {
                 return make_profile(kind, params, n);
             }),
             py::arg("kind"), py::arg("params"), py::arg("n"))
        .def_property_readonly("n", &NonlinearityProfile::n)
        .def("apply", [](const NonlinearityProfile& p, const Vector& x) { return p.apply(x); })
        .def("d1", [](const NonlinearityProfile& p, const Vector& x) { return p.d1(x); });
    m.def(
        "tanh_profile", [](int n) { return make_profile("tanh", {}, n); }, py::arg("n"));

    // frustration
    py::class_<FrustrationResult>(m, "FrustrationResult")
        .def_readonly("value", &FrustrationResult::value)
        .def_readonly("signature", &FrustrationResult::signature)
        .def_readonly("exact", &FrustrationResult::exact)
        .def_readonly("method", &FrustrationResult::method)
        .def_readonly("restarts_used", &FrustrationResult::restarts_used);
    m.def("frustration_energy", &energy, py::arg("graph"), py::arg("signature"));
    m.def(
        "frustration_exact", [](const SignedGraph& g) { return frustration_exact(g); }, py::arg("graph"));
    m.def(
        "frustration_heuristic",
        [](const SignedGraph& g, int restarts, std::uint64_t seed) {
            return frustration_heuristic(g, {.restarts = restarts, .seed = seed});
        },
        py::arg("graph"), py::arg("restarts") = 50, py::arg("seed") = 0);
    m.def(
        "frustration", [](const SignedGraph& g) { return frustration_auto(g); }, py::arg("graph"));
    py::class_<BoundReport>(m, "BoundReport")
        .def_readonly("pi1", &BoundReport::pi1)
        .def_readonly("pi2", &BoundReport::pi2)
        .def_readonly("ceiling", &BoundReport::frustration_ceiling)
        .def_readonly("upper", &BoundReport::upper)
        .def_readonly("holds", &BoundReport::holds)
        .def_readonly("symmetric_L", &BoundReport::symmetric_L);
    m.def(
        "check_pi1_bounds", [](const SignedGraph& g, const FrustrationResult& r) { return check_pi1_bounds(g, r); },
        py::arg("graph"), py::arg("frustration"));

    // continuous time
    m.def("vector_field", &vector_field, py::arg("graph"), py::arg("profile"), py::arg("pi"), py::arg("x"));
    m.def("jacobian", &jacobian, py::arg("graph"), py::arg("profile"), py::arg("pi"), py::arg("x"));
    m.def("lyapunov_value", &lyapunov_value, py::arg("profile"), py::arg("x"));
    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_property_readonly("states",
                               [](const Trajectory& t) {
                                   Matrix s(static_cast<Eigen::Index>(t.states.size()), t.states.front().size());
                                   for (std::size_t k = 0; k < t.states.size(); ++k) s.row(k) = t.states[k];
                                   return s;
                               })
        .def_property_readonly("terminal", [](const Trajectory& t) { return t.terminal(); })
        .def_readonly("converged", &Trajectory::converged)
        .def_readonly("steps", &Trajectory::steps);
    m.def(
        "integrate",
        [](const SignedGraph& g, const NonlinearityProfile& psi, double pi, const Vector& x0, double horizon,
           double step, double stop_tol, bool adaptive, int record_every) {
            return integrate(g, psi, pi, x0,
                             {.horizon = horizon,
                              .step = step,
                              .stop_tol = stop_tol,
                              .adaptive = adaptive,
                              .record_every = record_every});
        },
        py::arg("graph"), py::arg("profile"), py::arg("pi"), py::arg("x0"), py::arg("horizon") = 100.0,
        py::arg("step") = 0.01, py::arg("stop_tol") = 0.0, py::arg("adaptive") = false, py::arg("record_every") = 1);
    m.def(
        "classify_stability",
        [](const SignedGraph& g, const NonlinearityProfile& psi, double pi, const Vector& x) {
            const StabilityResult r = classify_stability(g, psi, pi, x);
            return py::make_tuple(std::string(to_string(r.kind)), r.leading);
        },
        py::arg("graph"), py::arg("profile"), py::arg("pi"), py::arg("x"));
    py::class_<EquilibriumRecord>(m, "Equilibrium")
        .def_readonly("state", &EquilibriumRecord::state)
        .def_readonly("residual", &EquilibriumRecord::residual)
        .def_property_readonly("stability", [](const EquilibriumRecord& r) { return std::string(to_string(r.stability)); })
        .def_readonly("is_origin", &EquilibriumRecord::is_origin);
    m.def(
        "find_equilibria",
        [](const SignedGraph& g, const NonlinearityProfile& psi, double pi, int n_seeds, std::uint64_t seed) {
            return find_equilibria(g, psi, pi, {.n_seeds = n_seeds, .seed = seed}).records;
        },
        py::arg("graph"), py::arg("profile"), py::arg("pi"), py::arg("n_seeds") = 50, py::arg("seed") = 0);

    // discrete time
    m.def("step", &step, py::arg("graph"), py::arg("profile"), py::arg("pi"), py::arg("step_size"), py::arg("x"));
    py::class_<DtOutcome>(m, "DtOutcome")
        .def_property_readonly("kind", [](const DtOutcome& o) { return std::string(to_string(o.kind)); })
        .def_readonly("state", &DtOutcome::state)
        .def_readonly("state_odd", &DtOutcome::state_odd)
        .def_readonly("iterations", &DtOutcome::iterations)
        .def_property_readonly("amplitude", &DtOutcome::amplitude)
        .def("nonzero", &DtOutcome::nonzero, py::arg("zero_tol") = 1e-6);
    m.def(
        "simulate",
        [](const SignedGraph& g, const NonlinearityProfile& psi, double pi, double step_size, const Vector& x0,
           long max_iters, double tol) {
            return simulate(g, psi, pi, step_size, x0, {.max_iters = max_iters, .tol = tol});
        },
        py::arg("graph"), py::arg("profile"), py::arg("pi"), py::arg("step_size"), py::arg("x0"),
        py::arg("max_iters") = 100000, py::arg("tol") = 1e-10);
    m.def(
        "first_bifurcation",
        [](const SpectralSummary& s) { return std::string(to_string(classify_first_bifurcation(s))); },
        py::arg("summary"));

    // sweeps
    py::class_<BranchRecord>(m, "BranchRecord")
        .def_readonly("branch", &BranchRecord::branch)
        .def_readonly("state", &BranchRecord::state)
        .def_readonly("norm1", &BranchRecord::norm1)
        .def_readonly("norm2", &BranchRecord::norm2)
        .def_readonly("stability", &BranchRecord::stability)
        .def_readonly("kind", &BranchRecord::kind)
        .def_readonly("amplitude", &BranchRecord::amplitude);
    py::class_<SweepCell>(m, "SweepCell")
        .def_readonly("pi", &SweepCell::pi)
        .def_readonly("records", &SweepCell::records)
        .def_readonly("undecided", &SweepCell::undecided);
    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("mode", &SweepResult::mode)
        .def_readonly("grid", &SweepResult::grid)
        .def_readonly("cells", &SweepResult::cells)
        .def_readonly("thresholds", &SweepResult::thresholds)
        .def_readonly("branch_count", &SweepResult::branch_count)
        .def_property_readonly("violations",
                               [](const SweepResult& r) {
                                   std::vector<std::pair<double, std::string>> out;
                                   for (const auto& v : r.violations) out.emplace_back(v.pi, v.what);
                                   return out;
                               })
        .def("summary_json", [](const SweepResult& r) { return dump_json(sweep_summary(r)); });
    m.def("make_grid", &make_grid, py::arg("lo"), py::arg("hi"), py::arg("step"));
    m.def(
        "sweep_ct",
        [](const SignedGraph& g, const NonlinearityProfile& psi, const std::vector<double>& grid, int seeds_per_point,
           std::uint64_t seed, int jobs) {
            py::gil_scoped_release release;
            SweepOptions o;
            o.seeds_per_point = seeds_per_point;
            o.seed = seed;
            o.jobs = jobs;
            return sweep_ct(g, psi, grid, o);
        },
        py::arg("graph"), py::arg("profile"), py::arg("grid"), py::arg("seeds_per_point") = 10, py::arg("seed") = 0,
        py::arg("jobs") = 1);
    m.def(
        "sweep_dt",
        [](const SignedGraph& g, const NonlinearityProfile& psi, const std::vector<double>& grid, double step_size,
           int seeds_per_point, std::uint64_t seed, int jobs) {
            py::gil_scoped_release release;
            SweepOptions o;
            o.seeds_per_point = seeds_per_point;
            o.seed = seed;
            o.jobs = jobs;
            return sweep_dt(g, psi, grid, step_size, o);
        },
        py::arg("graph"), py::arg("profile"), py::arg("grid"), py::arg("step_size"), py::arg("seeds_per_point") = 10,
        py::arg("seed") = 0, py::arg("jobs") = 1);
    m.def(
        "estimate_onset",
        [](const SweepResult& r, const std::string& which) {
            OnsetKind k;
            if (which == "nontrivial")
                k = OnsetKind::Nontrivial;
            else if (which == "multi")
                k = OnsetKind::Multi;
            else if (which == "cycle")
                k = OnsetKind::Cycle;
            else
                throw Error(ErrorCode::UnknownKind, "sweep.estimate_onset", "which must be nontrivial, multi or cycle");
            const Onset o = estimate_onset(r, k);
            return py::make_tuple(o.value, o.half_width);
        },
        py::arg("result"), py::arg("which"));
}
