#pragma once

#include "signet/graph.hpp"

#include <optional>

namespace signet {

struct EigenDecomposition {
    Vector values;   ///< nondecreasing
    Matrix vectors;  ///< orthonormal columns, vectors.col(k) pairs with values(k)
};

struct EighOptions {
    double symmetry_tol = 1e-10;  ///< relative to max |m_ij|
    int max_sweeps = 100;         ///< Jacobi sweeps / QL iterations per eigenvalue
    int jacobi_cutoff = 64;       ///< Jacobi for n <= cutoff, Householder + QL above
    bool want_vectors = true;
};

/// Dense symmetric eigensolver. Cyclic Jacobi for small matrices,
/// Householder tridiagonalisation with implicit-shift QL otherwise.
EigenDecomposition eigh(const Matrix& m, const EighOptions& opts = {});

/// Eigenvalues only; same algorithms.
Vector eigvalsh(const Matrix& m, const EighOptions& opts = {});

struct SpectralSummary {
    Vector eigs;  ///< spectrum of the normalized signed Laplacian, nondecreasing
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda_n = 0.0;
    double pi1 = 1.0;
    double pi2 = 0.0;          ///< +inf when lambda2 >= 1
    bool pi2_finite = true;
    std::optional<double> pi1d;
    std::optional<double> step_size;
    double max_degree = 0.0;
};

/// Spectrum of I - Delta^-1 A obtained as 1 - eig(H_s).
Vector spectrum_of_normalized_laplacian(const SignedGraph& g);

/// 1 / (1 - lambda); +inf when lambda >= 1.
double pitchfork_threshold(double lambda);

/// pi1, pi2 from eigenvalues and, when step_size is given, the
/// period-doubling threshold pi1d of the Euler map.
SpectralSummary thresholds(const SignedGraph& g, std::optional<double> step_size = std::nullopt);

/// Threshold arithmetic on an externally supplied spectrum.
SpectralSummary thresholds_from_spectrum(const Vector& eigs);

/// lambda_n(Delta - pi A).
double max_eig_Lpi(const SignedGraph& g, double pi);

struct Pi1dOptions {
    double tol = 1e-10;  ///< bracket width in pi
    int max_doublings = 200;
};

/// The unique pi > 0 with lambda_n(Delta - pi A) = 2 / step_size, found by
/// bisection. Requires step_size * max_i delta_i < 2.
double solve_pi1d(const SignedGraph& g, double step_size, const Pi1dOptions& opts = {});

}  // namespace signet
