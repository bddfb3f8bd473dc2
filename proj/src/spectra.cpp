#include "nctefa/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nctefa/errors.hpp"

namespace nctefa {

namespace {

double offdiag_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t p = 0; p < a.rows; ++p)
        for (std::size_t q = p + 1; q < a.cols; ++q) s += a(p, q) * a(p, q);
    return std::sqrt(2.0 * s);
}

} // namespace

SymmetricEigen sym_eigendecompose(const Matrix& input, int max_sweeps) {
    if (input.rows != input.cols) throw NumericError("eigendecomposition needs a square matrix");
    if (max_asymmetry(input) > 1e-12)
        throw NumericError("matrix is not symmetric (asymmetry > 1e-12)");

    const std::size_t n = input.rows;
    Matrix a = input;
    Matrix v = Matrix::identity(n);
    const double tol = 1e-13 * std::max(1.0, frobenius_norm(a));

    bool converged = (n <= 1) || offdiag_norm(a) <= tol;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = ((theta >= 0.0) ? 1.0 : -1.0) /
                        (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = a(r, p);
                        const double arq = a(r, q);
                        a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
                        a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
                    }
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
        converged = offdiag_norm(a) <= tol;
    }
    if (!converged)
        throw NumericError("Jacobi eigendecomposition did not converge within " +
                           std::to_string(max_sweeps) + " sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&a](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SymmetricEigen out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    }
    return out;
}

SpectralRadiusResult spectral_radius_symmetric(const Matrix& a, int max_iterations) {
    if (a.rows != a.cols) throw NumericError("spectral radius needs a square matrix");
    if (max_asymmetry(a) > 1e-12) throw NumericError("matrix is not symmetric");
    for (double x : a.a)
        if (x < 0.0) throw NumericError("spectral radius requires entrywise nonnegative input");

    const std::size_t n = a.rows;
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> y(n);
    double rho_prev = std::numeric_limits<double>::quiet_NaN();

    for (int it = 1; it <= max_iterations; ++it) {
        // y = (A + I) v
        for (std::size_t i = 0; i < n; ++i) {
            const double* ai = &a.a[i * n];
            double s = v[i];
            for (std::size_t j = 0; j < n; ++j) s += ai[j] * v[j];
            y[i] = s;
        }
        double rho = 0.0;
        for (std::size_t i = 0; i < n; ++i) rho += v[i] * y[i];
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = y[i] - rho * v[i];
            res += d * d;
        }
        res = std::sqrt(res);

        if (it > 1 && std::abs(rho - rho_prev) <= 1e-10 && res <= 1e-6) {
            SpectralRadiusResult out;
            out.lambda_max = rho - 1.0;
            out.eigenvector = v;
            out.iterations = it;
            out.residual = res;
            return out;
        }
        rho_prev = rho;
        double norm = 0.0;
        for (double x : y) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) throw NumericError("power iteration collapsed to the zero vector");
        for (std::size_t i = 0; i < n; ++i) v[i] = y[i] / norm;
    }
    throw NumericError("power iteration exhausted " + std::to_string(max_iterations) +
                       " iterations without converging");
}

} // namespace nctefa
