#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace signet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Diagonal +-1 gauge, stored as its diagonal.
using Signature = std::vector<int>;

struct Edge {
    int i = 0;
    int j = 0;
    double weight = 0.0;
};

/// Undirected, connected, loop-free signed graph with absolute degrees
/// delta_i = sum_j |a_ij|. Immutable once built.
class SignedGraph {
public:
    int n() const noexcept { return static_cast<int>(degrees_.size()); }
    const Matrix& weights() const noexcept { return weights_; }
    const Vector& degrees() const noexcept { return degrees_; }
    double max_degree() const noexcept { return degrees_.maxCoeff(); }

    /// Upper-triangular edge list (i < j), row-major order.
    std::vector<Edge> edges() const;
    int edge_count() const;

    /// True when every degree equals the first one to within rel_tol.
    bool is_degree_regular(double rel_tol = 1e-9) const;

    bool operator==(const SignedGraph& other) const {
        return weights_ == other.weights_;
    }

private:
    friend SignedGraph from_validated_weights(Matrix weights, const char* op);
    explicit SignedGraph(Matrix weights);

    Matrix weights_;
    Vector degrees_;
};

/// L = Delta - A, normalized L = I - Delta^-1 A, H = Delta^-1 A and the
/// symmetric similar matrix H_s = Delta^-1/2 A Delta^-1/2.
struct OperatorBundle {
    Matrix laplacian;
    Matrix normalized_laplacian;
    Matrix interaction;
    Matrix symmetrized_interaction;
};

SignedGraph build_graph(int n, const std::vector<Edge>& edges);

/// Validates symmetry, zero diagonal and connectivity of a dense matrix.
SignedGraph graph_from_matrix(const Matrix& weights);

OperatorBundle derive_operators(const SignedGraph& g);

struct BalanceResult {
    bool balanced = false;
    /// Balancing signature with s_0 = +1, present iff balanced.
    std::optional<Signature> signature;
};

/// Sign-consistent 2-colouring by BFS over edge signs, O(n + m).
BalanceResult is_structurally_balanced(const SignedGraph& g);

/// Gauge transformation a'_ij = s_i a_ij s_j.
SignedGraph switch_graph(const SignedGraph& g, const Signature& s);

struct RegularizeOptions {
    double target_degree = 1.0;
    double tol = 1e-10;
    int max_iter = 100000;
};

/// Symmetric diagonal scaling d_i a_ij d_j so that every absolute row sum
/// equals target_degree. Signs and symmetry are preserved.
SignedGraph regularize_degrees(const SignedGraph& g, const RegularizeOptions& opts = {});

struct RandomGraphParams {
    int n = 20;
    double edge_prob = 0.5;
    double negative_prob = 0.0;
    double weight_low = 0.0;
    double weight_high = 1.0;
    std::uint64_t seed = 0;
    int max_retries = 100;
};

/// Erdos-Renyi style signed graph. Magnitudes are uniform on
/// (weight_low, weight_high]. Every vertex pair consumes three draws
/// (presence, magnitude, sign) in row-major order, so graphs that share a
/// seed share their magnitudes, and the negative edge sets are nested in
/// negative_prob.
SignedGraph random_signed_graph(const RandomGraphParams& params);

/// Which retry produced the graph (0 when the first draw was connected).
struct RandomGraphInfo {
    int attempts = 1;
};
SignedGraph random_signed_graph(const RandomGraphParams& params, RandomGraphInfo& info);

bool is_connected(const Matrix& weights);

}  // namespace signet
