#pragma once

#include <vector>

#include "nctefa/graph.hpp"
#include "nctefa/matrix.hpp"

namespace nctefa {

/// Stabilization convention recorded in output metadata so alternative
/// conventions can be added later without ambiguity about existing files.
inline constexpr const char* kStabilizationConvention = "continuous-gu-normalization";

/// Hurwitz-stable system matrix A_s = A / (1 + lambda_max) - I derived from a
/// raw adjacency A. Its largest eigenvalue is -1 / (1 + lambda_max).
struct StabilizedSystem {
    Matrix a_s;
    double lambda_max = 0.0;
    const char* convention = kStabilizationConvention;
};

/// Positive-definite controllability Gramian W solving
/// A_s W + W A_s^T + I = 0, with its recorded relative residual.
struct GramianResult {
    Matrix w;
    double lyapunov_residual = 0.0;
};

StabilizedSystem stabilize(const Graph& g);

/// Closed-form solve through the eigendecomposition A_s = V M V^T with all
/// mu_i < 0: W = V diag(1 / (-2 mu_i)) V^T. Throws NumericError if the
/// residual exceeds 1e-8 (a defective eigendecomposition).
GramianResult controllability_gramian(const StabilizedSystem& s);

/// Entry i = trace of the Gramian for the single-input system B = e_i, which
/// for this symmetric closed form equals W_ii of the full B = I Gramian.
/// All entries are strictly positive.
std::vector<double> average_controllability(const Graph& g);

/// ||A_s W + W A_s^T + I||_F / ||I||_F
double verify_lyapunov(const StabilizedSystem& s, const Matrix& w);

} // namespace nctefa
