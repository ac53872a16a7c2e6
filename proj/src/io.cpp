#include "signet/io.hpp"

#include "signet/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace signet {

namespace {

constexpr const char* kParseOp = "io.load_graph";

std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::ParseError, kParseOp, "field '" + path + "': " + what);
}

int as_index(const Json& v, const std::string& path) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
        if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) return static_cast<int>(v.get<double>());
        field_error(path, "expected an integer vertex index, got " + v.dump());
    }
    return v.get<int>();
}

void dump_value(std::ostringstream& os, const Json& j, int indent, int depth) {
    auto newline = [&](int d) {
        if (indent < 0) return;
        os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ',';
                first = false;
                newline(depth + 1);
                os << Json(it.key()).dump() << (indent < 0 ? ":" : ": ");
                dump_value(os, it.value(), indent, depth + 1);
            }
            newline(depth);
            os << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
            os << '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) os << (flat ? ", " : ",");
                first = false;
                if (!flat) newline(depth + 1);
                dump_value(os, e, indent, depth + 1);
            }
            if (!flat) newline(depth);
            os << ']';
            return;
        }
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            if (!std::isfinite(x)) {
                os << "null";
            } else {
                std::string s = format_double(x);
                // Keep floats recognizable as floats.
                if (s.find_first_of(".eE") == std::string::npos) s += ".0";
                os << s;
            }
            return;
        }
        default:
            os << j.dump();
    }
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string stability_name(Stability s) { return std::string(to_string(s)); }

// Origin 0, then {x, -x} pairs numbered in order of first appearance.
std::vector<int> orbit_ids(const EquilibriumSet& set) {
    std::vector<int> ids(set.records.size(), -1);
    int next = 1;
    for (std::size_t a = 0; a < set.records.size(); ++a) {
        if (set.records[a].is_origin) {
            ids[a] = 0;
            continue;
        }
        if (ids[a] >= 0) continue;
        ids[a] = next;
        const Vector& x = set.records[a].state;
        const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
        for (std::size_t b = a + 1; b < set.records.size(); ++b) {
            if (ids[b] < 0 && (set.records[b].state + x).cwiseAbs().maxCoeff() <= 1e-8 * scale) {
                ids[b] = next;
                break;
            }
        }
        ++next;
    }
    return ids;
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string dump_json(const Json& j, int indent) {
    std::ostringstream os;
    dump_value(os, j, indent, 0);
    if (indent >= 0) os << '\n';
    return os.str();
}

GraphFile parse_graph_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::ParseError, kParseOp, "malformed JSON at " + line_col(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    if (!doc.is_object()) field_error("<root>", "expected an object");
    if (!doc.contains("n")) field_error("n", "missing");
    if (!doc.contains("edges")) field_error("edges", "missing");
    const int n = as_index(doc["n"], "n");
    const Json& edges = doc["edges"];
    if (!edges.is_array()) field_error("edges", "expected an array");
    std::vector<Edge> list;
    list.reserve(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const std::string path = "edges[" + std::to_string(k) + "]";
        const Json& e = edges[k];
        if (!e.is_array() || e.size() != 3) field_error(path, "expected [i, j, w]");
        if (!e[2].is_number()) field_error(path + "[2]", "expected a number, got " + e[2].dump());
        list.push_back({as_index(e[0], path + "[0]"), as_index(e[1], path + "[1]"), e[2].get<double>()});
    }
    GraphFile f{build_graph(n, list), doc.contains("meta") ? doc["meta"] : Json()};
    return f;
}

GraphFile parse_graph_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<Edge> list;
    int n = 0;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (list.empty() && fields.size() == 3 && fields[0].find_first_of("0123456789") == std::string::npos)
            continue;  // header
        if (fields.size() != 3)
            throw Error(ErrorCode::ParseError, kParseOp,
                        "line " + std::to_string(line_no) + ": expected 3 fields i,j,w, got " +
                            std::to_string(fields.size()));
        double vals[3];
        for (int c = 0; c < 3; ++c) {
            std::size_t used = 0;
            try {
                vals[c] = std::stod(fields[c], &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || fields[c].find_first_not_of(" \t", used) != std::string::npos)
                throw Error(ErrorCode::ParseError, kParseOp,
                            "line " + std::to_string(line_no) + ", field " + std::to_string(c + 1) +
                                ": not a number: '" + fields[c] + "'");
        }
        for (int c = 0; c < 2; ++c)
            if (vals[c] != std::floor(vals[c]) || vals[c] < 0)
                throw Error(ErrorCode::ParseError, kParseOp,
                            "line " + std::to_string(line_no) + ", field " + std::to_string(c + 1) +
                                ": vertex index must be a non-negative integer");
        Edge e{static_cast<int>(vals[0]), static_cast<int>(vals[1]), vals[2]};
        n = std::max({n, e.i + 1, e.j + 1});
        list.push_back(e);
    }
    if (list.empty()) throw Error(ErrorCode::ParseError, kParseOp, "edge list is empty");
    return GraphFile{build_graph(n, list), Json()};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "io.read_file", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::BadArgument, "io.write_file", "cannot write '" + path + "'");
    out << contents;
}

GraphFile load_graph(const std::string& path) {
    const std::string text = read_file(path);
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    return csv ? parse_graph_csv(text) : parse_graph_json(text);
}

Json graph_to_json(const SignedGraph& g, const Json& meta) {
    Json j;
    j["n"] = g.n();
    Json edges = Json::array();
    for (const Edge& e : g.edges()) edges.push_back(Json::array({e.i, e.j, e.weight}));
    j["edges"] = std::move(edges);
    if (!meta.is_null()) j["meta"] = meta;
    return j;
}

void save_graph(const std::string& path, const SignedGraph& g, const Json& meta) {
    write_file(path, dump_json(graph_to_json(g, meta)));
}

Json to_json(const SpectralSummary& s) {
    Json j;
    j["lambda"] = std::vector<double>(s.eigs.data(), s.eigs.data() + s.eigs.size());
    j["pi1"] = s.pi1;
    j["pi2"] = s.pi2_finite ? Json(s.pi2) : Json(nullptr);
    j["pi1d"] = optional_number(s.pi1d);
    j["eps_step"] = optional_number(s.step_size);
    j["max_degree"] = s.max_degree;
    return j;
}

Json to_json(const FrustrationResult& r) {
    Json j;
    j["value"] = r.value;
    j["signature"] = r.signature;
    j["exact"] = r.exact;
    j["restarts"] = r.restarts_used;
    j["method"] = r.method;
    return j;
}

Json to_json(const BoundReport& r) {
    Json j;
    j["pi1"] = r.pi1;
    j["pi2"] = r.pi2;
    j["frustration_ceiling"] = r.frustration_ceiling;
    j["upper"] = r.upper;
    j["lower"] = r.lower;
    j["holds"] = r.holds;
    j["degree_regular"] = r.symmetric_L;
    j["exact_frustration"] = r.exact_frustration;
    return j;
}

Json to_json(const EquilibriumSet& set) {
    Json j;
    j["pi"] = set.pi;
    j["seeds_used"] = set.seeds_used;
    j["converged_fraction"] = set.converged_fraction;
    const auto ids = orbit_ids(set);
    Json recs = Json::array();
    for (std::size_t k = 0; k < set.records.size(); ++k) {
        const auto& r = set.records[k];
        Json e;
        e["branch_id"] = ids[k];
        e["state"] = std::vector<double>(r.state.data(), r.state.data() + r.state.size());
        e["norm1"] = r.state.cwiseAbs().sum();
        e["norm2"] = r.state.norm();
        e["residual"] = r.residual;
        e["stability"] = stability_name(r.stability);
        e["leading"] = r.leading;
        recs.push_back(std::move(e));
    }
    j["equilibria"] = std::move(recs);
    return j;
}

Json to_json(const DtOutcome& o) {
    Json j;
    j["kind"] = std::string(to_string(o.kind));
    j["pi"] = o.pi;
    j["eps_step"] = o.step_size;
    j["iterations"] = o.iterations;
    j["state"] = std::vector<double>(o.state.data(), o.state.data() + o.state.size());
    if (o.kind == DtKind::Period2) {
        j["state_odd"] = std::vector<double>(o.state_odd.data(), o.state_odd.data() + o.state_odd.size());
        j["amplitude"] = o.amplitude();
    }
    return j;
}

Json sweep_summary(const SweepResult& r) {
    Json j;
    j["mode"] = r.mode;
    j["grid"] = {{"lo", r.grid.front()}, {"hi", r.grid.back()}, {"points", r.grid.size()}};
    j["thresholds"] = to_json(r.thresholds);
    Json onsets;
    const std::pair<const char*, OnsetKind> kinds[] = {
        {"pi1_hat", OnsetKind::Nontrivial}, {"pi2_hat", OnsetKind::Multi}, {"pi1d_hat", OnsetKind::Cycle}};
    for (const auto& [name, kind] : kinds) {
        try {
            const Onset o = estimate_onset(r, kind);
            onsets[name] = {{"value", o.value}, {"half_width", o.half_width}};
        } catch (const Error&) {
            onsets[name] = nullptr;
        }
    }
    j["onsets"] = std::move(onsets);
    j["branch_count"] = r.branch_count;
    Json viol = Json::array();
    for (const auto& v : r.violations) viol.push_back({{"pi", v.pi}, {"what", v.what}});
    j["violations"] = std::move(viol);
    Json cells = Json::array();
    for (const auto& c : r.cells) {
        double amp = 0.0;
        for (const auto& b : c.records) amp = std::max(amp, b.amplitude);
        Json e;
        e["pi"] = c.pi;
        e["states"] = c.state_count();
        e["nontrivial"] = c.nontrivial_count();
        if (r.mode == "dt") {
            e["cycle_amplitude"] = amp;
            e["undecided"] = c.undecided;
        }
        cells.push_back(std::move(e));
    }
    j["cells"] = std::move(cells);
    return j;
}

void write_trajectory_csv(std::ostream& os, const std::vector<double>& times, const std::vector<Vector>& states) {
    if (times.size() != states.size())
        throw Error(ErrorCode::BadArgument, "io.write_trajectory_csv", "times and states differ in length");
    const Eigen::Index n = states.empty() ? 0 : states.front().size();
    os << 't';
    for (Eigen::Index i = 1; i <= n; ++i) os << ",x" << i;
    os << '\n';
    for (std::size_t k = 0; k < states.size(); ++k) {
        os << format_double(times[k]);
        for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_double(states[k](i));
        os << '\n';
    }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) { write_trajectory_csv(os, t.times, t.states); }

void write_equilibria_csv(std::ostream& os, const EquilibriumSet& set) {
    os << "pi,branch_id,norm2,norm1,stability\n";
    const auto ids = orbit_ids(set);
    for (std::size_t k = 0; k < set.records.size(); ++k) {
        const auto& r = set.records[k];
        os << format_double(set.pi) << ',' << ids[k] << ',' << format_double(r.state.norm()) << ','
           << format_double(r.state.cwiseAbs().sum()) << ',' << stability_name(r.stability) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
    os << "pi,branch,norm1,norm2,stability,kind\n";
    for (const auto& c : r.cells)
        for (const auto& b : c.records)
            os << format_double(c.pi) << ',' << b.branch << ',' << format_double(b.norm1) << ','
               << format_double(b.norm2) << ',' << b.stability << ',' << b.kind << '\n';
}

Vector parse_state(const std::string& text, int n) {
    std::string cleaned = text;
    for (char& c : cleaned)
        if (c == ',' || c == '\n' || c == '\r' || c == '\t') c = ' ';
    std::istringstream in(cleaned);
    std::vector<double> vals;
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size())
            throw Error(ErrorCode::ParseError, "io.parse_state", "not a number: '" + tok + "'");
        vals.push_back(v);
    }
    if (static_cast<int>(vals.size()) != n)
        throw Error(ErrorCode::ParseError, "io.parse_state",
                    "expected " + std::to_string(n) + " values, got " + std::to_string(vals.size()));
    return Eigen::Map<Vector>(vals.data(), n);
}

}  // namespace signet
