#include "nctefa/nct.hpp"

#include <cmath>
#include <string>

#include "nctefa/errors.hpp"
#include "nctefa/spectra.hpp"

namespace nctefa {

StabilizedSystem stabilize(const Graph& g) {
    const Matrix a = g.dense_adjacency();
    const double lambda = spectral_radius_symmetric(a).lambda_max;
    const std::size_t n = a.rows;
    StabilizedSystem s;
    s.lambda_max = lambda;
    s.a_s = a;
    const double scale = 1.0 / (1.0 + lambda);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            s.a_s(i, j) = a(i, j) * scale - (i == j ? 1.0 : 0.0);
    return s;
}

GramianResult controllability_gramian(const StabilizedSystem& s) {
    const std::size_t n = s.a_s.rows;
    const SymmetricEigen eig = sym_eigendecompose(s.a_s);
    for (double mu : eig.eigenvalues)
        if (!(mu < 0.0))
            throw NumericError("system is not Hurwitz: eigenvalue " + std::to_string(mu));

    // W = sum_i 1/(-2 mu_i) v_i v_i^T, filled symmetrically.
    const Matrix& v = eig.eigenvectors;
    GramianResult out;
    out.w = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                acc += v(i, k) * v(j, k) / (-2.0 * eig.eigenvalues[k]);
            out.w(i, j) = acc;
            out.w(j, i) = acc;
        }
    }
    out.lyapunov_residual = verify_lyapunov(s, out.w);
    if (out.lyapunov_residual > 1e-8)
        throw NumericError("Lyapunov residual " + std::to_string(out.lyapunov_residual) +
                           " exceeds 1e-8");
    return out;
}

std::vector<double> average_controllability(const Graph& g) {
    const GramianResult gr = controllability_gramian(stabilize(g));
    const std::size_t n = gr.w.rows;
    std::vector<double> ac(n);
    for (std::size_t i = 0; i < n; ++i) {
        ac[i] = gr.w(i, i);
        if (!(ac[i] > 0.0))
            throw NumericError("nonpositive average controllability at node " + std::to_string(i));
    }
    return ac;
}

double verify_lyapunov(const StabilizedSystem& s, const Matrix& w) {
    const std::size_t n = s.a_s.rows;
    if (w.rows != n || w.cols != n) throw NumericError("Gramian shape mismatch");
    // A_s is symmetric, so W A_s^T = W A_s.
    const Matrix aw = matmul(s.a_s, w);
    const Matrix wa = matmul(w, s.a_s);
    double num = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double r = aw(i, j) + wa(i, j) + (i == j ? 1.0 : 0.0);
            num += r * r;
        }
    }
    return std::sqrt(num) / std::sqrt(static_cast<double>(n));
}

} // namespace nctefa
