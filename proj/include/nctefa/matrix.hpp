#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace nctefa {

/// Dense row-major matrix of doubles. Everything in this project is desk
/// scale (n below 1000), so dense storage is fine throughout.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

    bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

inline Matrix matmul(const Matrix& x, const Matrix& y) {
    Matrix z(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double* xi = &x.a[i * x.cols];
        double* zi = &z.a[i * z.cols];
        for (std::size_t k = 0; k < x.cols; ++k) {
            const double v = xi[k];
            if (v == 0.0) continue;
            const double* yk = &y.a[k * y.cols];
            for (std::size_t j = 0; j < y.cols; ++j) zi[j] += v * yk[j];
        }
    }
    return z;
}

/// z = x * y^T
inline Matrix matmul_transB(const Matrix& x, const Matrix& y) {
    Matrix z(x.rows, y.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double* xi = &x.a[i * x.cols];
        for (std::size_t j = 0; j < y.rows; ++j) {
            const double* yj = &y.a[j * y.cols];
            double s = 0.0;
            for (std::size_t k = 0; k < x.cols; ++k) s += xi[k] * yj[k];
            z(i, j) = s;
        }
    }
    return z;
}

/// z = x^T * y
inline Matrix matmul_transA(const Matrix& x, const Matrix& y) {
    Matrix z(x.cols, y.cols);
    for (std::size_t k = 0; k < x.rows; ++k) {
        const double* xk = &x.a[k * x.cols];
        const double* yk = &y.a[k * y.cols];
        for (std::size_t i = 0; i < x.cols; ++i) {
            const double v = xk[i];
            if (v == 0.0) continue;
            double* zi = &z.a[i * z.cols];
            for (std::size_t j = 0; j < y.cols; ++j) zi[j] += v * yk[j];
        }
    }
    return z;
}

inline Matrix transpose(const Matrix& x) {
    Matrix z(x.cols, x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) z(j, i) = x(i, j);
    return z;
}

inline double frobenius_norm(const Matrix& x) {
    double s = 0.0;
    for (double v : x.a) s += v * v;
    return std::sqrt(s);
}

inline double max_abs(const Matrix& x) {
    double m = 0.0;
    for (double v : x.a) m = std::max(m, std::abs(v));
    return m;
}

inline double max_asymmetry(const Matrix& x) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = i + 1; j < x.cols; ++j) m = std::max(m, std::abs(x(i, j) - x(j, i)));
    return m;
}

} // namespace nctefa
