#include "unprompt/tensor.hpp"

#include <cmath>
#include <string>

namespace unprompt {

namespace {

void require_same_size(const DenseVector& a, const DenseVector& b, const char* who) {
    if (a.size() != b.size()) {
        throw DimensionMismatch(std::string(who) + ": vector sizes " +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
}

}  // namespace

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

double dot(const DenseVector& a, const DenseVector& b) {
    require_same_size(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const DenseVector& a) { return std::sqrt(dot(a, a)); }

DenseVector vsub(const DenseVector& a, const DenseVector& b) {
    require_same_size(a, b, "vsub");
    DenseVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

DenseVector vadd(const DenseVector& a, const DenseVector& b) {
    require_same_size(a, b, "vadd");
    DenseVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

DenseVector vscale(const DenseVector& a, double c) {
    DenseVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
    return r;
}

void axpy(double c, const DenseVector& x, DenseVector& y) {
    require_same_size(x, y, "axpy");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

bool all_finite(const DenseVector& a) {
    for (double v : a) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

double relative_error(const DenseVector& a, const DenseVector& b) {
    return norm2(vsub(a, b)) / (1.0 + norm2(b));
}

DenseVector matvec(const DenseMatrix& m, const DenseVector& x) {
    if (m.cols != x.size()) {
        throw DimensionMismatch("matvec: matrix cols " + std::to_string(m.cols) +
                                " vs vector size " + std::to_string(x.size()));
    }
    DenseVector y(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* row = m.data.data() + i * m.cols;
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.rows) {
        throw DimensionMismatch("matmul: inner dims " + std::to_string(a.cols) + " vs " +
                                std::to_string(b.rows));
    }
    DenseMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a.at(i, k);
            if (aik == 0.0) continue;
            const double* brow = b.data.data() + k * b.cols;
            double* crow = c.data.data() + i * b.cols;
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

DenseMatrix transpose(const DenseMatrix& m) {
    DenseMatrix t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
    return t;
}

DenseMatrix cholesky(const DenseMatrix& a) {
    if (a.rows != a.cols) {
        throw DimensionMismatch("cholesky: matrix is " + std::to_string(a.rows) + "x" +
                                std::to_string(a.cols));
    }
    const std::size_t n = a.rows;
    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a.at(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l.at(j, k) * l.at(j, k);
        if (!(d > 0.0)) {
            throw NotSpd("cholesky: pivot " + std::to_string(d) + " at column " +
                         std::to_string(j));
        }
        const double ljj = std::sqrt(d);
        l.at(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a.at(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
            l.at(i, j) = s / ljj;
        }
    }
    return l;
}

DenseVector spd_solve(const DenseMatrix& a, const DenseVector& b) {
    if (a.rows != b.size()) {
        throw DimensionMismatch("spd_solve: matrix rows " + std::to_string(a.rows) +
                                " vs rhs size " + std::to_string(b.size()));
    }
    const DenseMatrix l = cholesky(a);
    const std::size_t n = a.rows;
    // forward: l*z = b
    DenseVector z(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l.at(i, k) * z[k];
        z[i] = s / l.at(i, i);
    }
    // back: l^T*x = z
    DenseVector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = z[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l.at(k, ii) * x[k];
        x[ii] = s / l.at(ii, ii);
    }
    return x;
}

DenseVector rank_one_inverse_apply(const DenseMatrix& a, const DenseVector& x) {
    const DenseVector ainv_x = spd_solve(a, x);
    const double leverage = dot(x, ainv_x);
    const double denom = 1.0 - leverage;
    if (std::fabs(denom) < 1e-10) {
        throw LeverageSingular("rank_one_inverse_apply: 1 - x^T a^-1 x = " +
                               std::to_string(denom));
    }
    return vscale(ainv_x, 1.0 / denom);
}

void jacobi_eigen_sym(const DenseMatrix& a, DenseVector& values, DenseMatrix* vectors,
                      int max_sweeps) {
    if (a.rows != a.cols) {
        throw DimensionMismatch("jacobi_eigen_sym: matrix is " + std::to_string(a.rows) + "x" +
                                std::to_string(a.cols));
    }
    const std::size_t n = a.rows;
    DenseMatrix m = a;
    if (vectors) *vectors = DenseMatrix::identity(n);

    // Scale-aware stopping: rotate until off-diagonal mass is negligible
    // against the diagonal.
    double diag_scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) diag_scale += std::fabs(m.at(i, i));
    diag_scale = (diag_scale == 0.0) ? 1.0 : diag_scale / static_cast<double>(n);
    const double tol = 1e-14 * (1.0 + diag_scale);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::fabs(m.at(p, q));
        if (off <= tol * static_cast<double>(n)) {
            values.assign(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) values[i] = m.at(i, i);
            return;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m.at(p, q);
                if (std::fabs(apq) <= tol * 1e-3) continue;
                const double app = m.at(p, p);
                const double aqq = m.at(q, q);
                const double theta = 0.5 * (aqq - app) / apq;
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m.at(k, p);
                    const double mkq = m.at(k, q);
                    m.at(k, p) = c * mkp - s * mkq;
                    m.at(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m.at(p, k);
                    const double mqk = m.at(q, k);
                    m.at(p, k) = c * mpk - s * mqk;
                    m.at(q, k) = s * mpk + c * mqk;
                }
                if (vectors) {
                    for (std::size_t k = 0; k < n; ++k) {
                        const double vkp = vectors->at(k, p);
                        const double vkq = vectors->at(k, q);
                        vectors->at(k, p) = c * vkp - s * vkq;
                        vectors->at(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    throw CovarianceFailure("jacobi_eigen_sym: no convergence after " +
                            std::to_string(max_sweeps) + " sweeps");
}

}  // namespace unprompt
