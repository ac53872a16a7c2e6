#include "signet/graph.hpp"

#include "signet/error.hpp"
#include "signet/rng.hpp"

#include <cmath>
#include <queue>
#include <sstream>

namespace signet {

namespace {

std::string pair_str(int i, int j) {
    std::ostringstream os;
    os << "(" << i << ", " << j << ")";
    return os.str();
}

}  // namespace

SignedGraph::SignedGraph(Matrix weights) : weights_(std::move(weights)) {
    degrees_ = weights_.cwiseAbs().rowwise().sum();
}

std::vector<Edge> SignedGraph::edges() const {
    std::vector<Edge> out;
    for (int i = 0; i < n(); ++i) {
        for (int j = i + 1; j < n(); ++j) {
            if (weights_(i, j) != 0.0) out.push_back({i, j, weights_(i, j)});
        }
    }
    return out;
}

int SignedGraph::edge_count() const {
    int m = 0;
    for (int i = 0; i < n(); ++i)
        for (int j = i + 1; j < n(); ++j)
            if (weights_(i, j) != 0.0) ++m;
    return m;
}

bool SignedGraph::is_degree_regular(double rel_tol) const {
    const double ref = degrees_(0);
    return ((degrees_.array() - ref).abs() <= rel_tol * ref).all();
}

bool is_connected(const Matrix& weights) {
    const int n = static_cast<int>(weights.rows());
    if (n == 0) return false;
    std::vector<char> seen(n, 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    int count = 1;
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (int v = 0; v < n; ++v) {
            if (!seen[v] && weights(u, v) != 0.0) {
                seen[v] = 1;
                ++count;
                frontier.push(v);
            }
        }
    }
    return count == n;
}

SignedGraph from_validated_weights(Matrix weights, const char* op) {
    const int n = static_cast<int>(weights.rows());
    if (n < 2) throw Error(ErrorCode::BadArgument, op, "need at least 2 vertices");
    if (!is_connected(weights))
        throw Error(ErrorCode::DisconnectedGraph, op, "graph of nonzero weights is not connected");
    return SignedGraph(std::move(weights));
}

SignedGraph build_graph(int n, const std::vector<Edge>& edges) {
    constexpr const char* op = "graph.build_graph";
    if (n < 2) throw Error(ErrorCode::BadArgument, op, "need at least 2 vertices, got " + std::to_string(n));
    Matrix w = Matrix::Zero(n, n);
    for (const Edge& e : edges) {
        if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
            throw Error(ErrorCode::BadVertex, op, "edge " + pair_str(e.i, e.j) + " out of range for n=" + std::to_string(n));
        if (e.i == e.j) throw Error(ErrorCode::SelfLoop, op, "self-loop at vertex " + std::to_string(e.i));
        if (e.weight == 0.0 || !std::isfinite(e.weight))
            throw Error(ErrorCode::ZeroWeight, op, "edge " + pair_str(e.i, e.j) + " has zero or non-finite weight");
        if (w(e.i, e.j) != 0.0) throw Error(ErrorCode::DuplicateEdge, op, "edge " + pair_str(e.i, e.j) + " given twice");
        w(e.i, e.j) = e.weight;
        w(e.j, e.i) = e.weight;
    }
    return from_validated_weights(std::move(w), op);
}

SignedGraph graph_from_matrix(const Matrix& weights) {
    constexpr const char* op = "graph.graph_from_matrix";
    if (weights.rows() != weights.cols()) throw Error(ErrorCode::BadArgument, op, "matrix is not square");
    const int n = static_cast<int>(weights.rows());
    for (int i = 0; i < n; ++i) {
        if (weights(i, i) != 0.0) throw Error(ErrorCode::SelfLoop, op, "nonzero diagonal at " + std::to_string(i));
        for (int j = i + 1; j < n; ++j) {
            if (weights(i, j) != weights(j, i))
                throw Error(ErrorCode::NotSymmetric, op, "a" + pair_str(i, j) + " != a" + pair_str(j, i));
            if (!std::isfinite(weights(i, j))) throw Error(ErrorCode::ZeroWeight, op, "non-finite weight at " + pair_str(i, j));
        }
    }
    return from_validated_weights(weights, op);
}

OperatorBundle derive_operators(const SignedGraph& g) {
    const Matrix& a = g.weights();
    const Vector& d = g.degrees();
    const int n = g.n();
    OperatorBundle ops;
    ops.laplacian = Matrix(d.asDiagonal()) - a;
    ops.interaction = d.cwiseInverse().asDiagonal() * a;
    ops.normalized_laplacian = Matrix::Identity(n, n) - ops.interaction;
    const Vector inv_sqrt = d.cwiseSqrt().cwiseInverse();
    ops.symmetrized_interaction = inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal();
    ops.symmetrized_interaction = (0.5 * (ops.symmetrized_interaction + ops.symmetrized_interaction.transpose())).eval();
    return ops;
}

BalanceResult is_structurally_balanced(const SignedGraph& g) {
    const int n = g.n();
    const Matrix& a = g.weights();
    Signature s(n, 0);
    s[0] = 1;
    std::queue<int> frontier;
    frontier.push(0);
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (int v = 0; v < n; ++v) {
            if (a(u, v) == 0.0) continue;
            const int want = a(u, v) > 0 ? s[u] : -s[u];
            if (s[v] == 0) {
                s[v] = want;
                frontier.push(v);
            } else if (s[v] != want) {
                return {false, std::nullopt};
            }
        }
    }
    return {true, std::move(s)};
}

SignedGraph switch_graph(const SignedGraph& g, const Signature& s) {
    constexpr const char* op = "graph.switch";
    if (static_cast<int>(s.size()) != g.n())
        throw Error(ErrorCode::BadSignatureLength, op,
                    "signature length " + std::to_string(s.size()) + " != n=" + std::to_string(g.n()));
    Vector sv(g.n());
    for (int i = 0; i < g.n(); ++i) {
        if (s[i] != 1 && s[i] != -1) throw Error(ErrorCode::BadArgument, op, "signature entries must be +-1");
        sv(i) = s[i];
    }
    Matrix w = sv.asDiagonal() * g.weights() * sv.asDiagonal();
    return from_validated_weights(std::move(w), op);
}

SignedGraph regularize_degrees(const SignedGraph& g, const RegularizeOptions& opts) {
    constexpr const char* op = "graph.regularize_degrees";
    if (!(opts.target_degree > 0.0) || !(opts.tol > 0.0))
        throw Error(ErrorCode::BadArgument, op, "target degree and tol must be positive");
    const Matrix b = g.weights().cwiseAbs();
    const double t = opts.target_degree;
    // Start from the uniform scaling that fixes the mean degree.
    Vector d = Vector::Constant(g.n(), std::sqrt(t / g.degrees().mean()));
    double deviation = 0.0;
    for (int it = 0; it < opts.max_iter; ++it) {
        const Vector bd = b * d;
        const Vector rows = d.cwiseProduct(bd);
        deviation = (rows.array() - t).abs().maxCoeff();
        if (deviation <= opts.tol) {
            Matrix w = d.asDiagonal() * g.weights() * d.asDiagonal();
            // Exact symmetry regardless of rounding order.
            w = (0.5 * (w + w.transpose())).eval();
            return from_validated_weights(std::move(w), op);
        }
        d = (d.array() * (t / bd.array())).sqrt().matrix();
        if (!d.allFinite()) break;
    }
    std::ostringstream msg;
    msg << "row sums not within tol after " << opts.max_iter << " iterations (max deviation " << deviation << ")";
    throw Error(ErrorCode::NoConvergence, op, msg.str());
}

SignedGraph random_signed_graph(const RandomGraphParams& p) {
    RandomGraphInfo info;
    return random_signed_graph(p, info);
}

SignedGraph random_signed_graph(const RandomGraphParams& p, RandomGraphInfo& info) {
    constexpr const char* op = "graph.random_signed_graph";
    if (p.n < 2) throw Error(ErrorCode::BadArgument, op, "n must be >= 2");
    if (!(p.edge_prob > 0.0 && p.edge_prob <= 1.0)) throw Error(ErrorCode::BadArgument, op, "edge_prob must be in (0, 1]");
    if (!(p.negative_prob >= 0.0 && p.negative_prob <= 1.0))
        throw Error(ErrorCode::BadArgument, op, "negative_prob must be in [0, 1]");
    if (!(p.weight_low >= 0.0 && p.weight_low < p.weight_high))
        throw Error(ErrorCode::BadArgument, op, "need 0 <= weight_low < weight_high");
    if (p.max_retries < 1) throw Error(ErrorCode::BadArgument, op, "max_retries must be >= 1");

    for (int attempt = 0; attempt < p.max_retries; ++attempt) {
        Rng rng(derive_seed(p.seed, static_cast<std::uint64_t>(attempt)));
        Matrix w = Matrix::Zero(p.n, p.n);
        for (int i = 0; i < p.n; ++i) {
            for (int j = i + 1; j < p.n; ++j) {
                const double u_edge = rng.uniform();
                const double u_mag = rng.uniform();
                const double u_sign = rng.uniform();
                if (u_edge >= p.edge_prob) continue;
                // 1 - u lies in (0, 1], hence the half-open (low, high].
                const double mag = p.weight_low + (p.weight_high - p.weight_low) * (1.0 - u_mag);
                const double val = u_sign < p.negative_prob ? -mag : mag;
                w(i, j) = val;
                w(j, i) = val;
            }
        }
        if (is_connected(w)) {
            info.attempts = attempt + 1;
            return from_validated_weights(std::move(w), op);
        }
    }
    throw Error(ErrorCode::CannotConnect, op,
                "no connected draw in " + std::to_string(p.max_retries) + " attempts; edge_prob too small for n");
}

}  // namespace signet
