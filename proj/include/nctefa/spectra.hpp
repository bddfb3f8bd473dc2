#pragma once

#include <vector>

#include "nctefa/matrix.hpp"

namespace nctefa {

/// Full eigendecomposition of a symmetric matrix. Column i of `eigenvectors`
/// pairs with `eigenvalues[i]`; eigenvalues are ascending. Residual
/// guarantees: ||V^T V - I||_max <= 1e-8 and
/// ||A V - V Lambda||_max <= 1e-8 * max(1, ||A||_max).
struct SymmetricEigen {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
};

/// Cyclic Jacobi rotations. Input must be symmetric within 1e-12 absolute
/// asymmetry; throws NumericError otherwise or if the sweep budget runs out.
SymmetricEigen sym_eigendecompose(const Matrix& a, int max_sweeps = 50);

struct SpectralRadiusResult {
    double lambda_max = 0.0;
    std::vector<double> eigenvector; // unit L2, entrywise nonnegative
    int iterations = 0;
    double residual = 0.0; // ||A v - lambda v||_2
};

/// Power iteration on (A + I) from a strictly positive start vector; the +I
/// shift removes the period-2 oscillation on bipartite graphs. Converged when
/// successive Rayleigh quotients differ by <= 1e-10 and the eigen-residual is
/// <= 1e-6. Requires A symmetric and entrywise nonnegative.
SpectralRadiusResult spectral_radius_symmetric(const Matrix& a, int max_iterations = 10000);

} // namespace nctefa
