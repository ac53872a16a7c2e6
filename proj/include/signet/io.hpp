#pragma once

#include "signet/dynamics_ct.hpp"
#include "signet/dynamics_dt.hpp"
#include "signet/frustration.hpp"
#include "signet/graph.hpp"
#include "signet/spectra.hpp"
#include "signet/sweep.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace signet {

using Json = nlohmann::ordered_json;

/// %.17g; non-finite values become "nan", "inf" or "-inf".
std::string format_double(double x);

/// Serializes with every floating value at 17 significant digits
/// (non-finite values as null), so reruns compare byte for byte.
std::string dump_json(const Json& j, int indent = 2);

struct GraphFile {
    SignedGraph graph;
    Json meta;  ///< null when absent
};

/// {"n": 3, "edges": [[i, j, w], ...], "meta": {...}}; errors carry
/// line/column or the offending field path.
GraphFile parse_graph_json(const std::string& text);
/// One "i,j,w" edge per line, 0-based; blank lines, '#' comments and an
/// "i,j,w" header are skipped.
GraphFile parse_graph_csv(const std::string& text);
/// Dispatches on the extension: .csv is an edge list, anything else JSON.
GraphFile load_graph(const std::string& path);

Json graph_to_json(const SignedGraph& g, const Json& meta = Json());
void save_graph(const std::string& path, const SignedGraph& g, const Json& meta = Json());

Json to_json(const SpectralSummary& s);
Json to_json(const FrustrationResult& r);
Json to_json(const BoundReport& r);
Json to_json(const EquilibriumSet& set);
Json to_json(const DtOutcome& o);
Json sweep_summary(const SweepResult& r);

/// t,x1..xn
void write_trajectory_csv(std::ostream& os, const std::vector<double>& times, const std::vector<Vector>& states);
void write_trajectory_csv(std::ostream& os, const Trajectory& t);
/// pi,branch_id,norm2,norm1,stability; x and -x share a branch id, the origin is 0.
void write_equilibria_csv(std::ostream& os, const EquilibriumSet& set);
/// pi,branch,norm1,norm2,stability,kind
void write_sweep_csv(std::ostream& os, const SweepResult& r);

/// Reads a whole file; throws ParseError naming the path when it cannot.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// One vector per line or comma/space separated values on one line.
Vector parse_state(const std::string& text, int n);

}  // namespace signet
