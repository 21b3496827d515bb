#pragma once

#include <cstddef>
#include <vector>

#include "unprompt/errors.hpp"

namespace unprompt {

// All numeric state in the toolkit is double precision. Vectors are plain
// std::vector<double>; matrices are dense row-major.
using DenseVector = std::vector<double>;

struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major, rows*cols entries

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static DenseMatrix identity(std::size_t n);
};

// --- vector helpers -------------------------------------------------------

double dot(const DenseVector& a, const DenseVector& b);
double norm2(const DenseVector& a);                       // Euclidean norm
DenseVector vsub(const DenseVector& a, const DenseVector& b);
DenseVector vadd(const DenseVector& a, const DenseVector& b);
DenseVector vscale(const DenseVector& a, double c);
void axpy(double c, const DenseVector& x, DenseVector& y);  // y += c*x
bool all_finite(const DenseVector& a);

// Relative gap used throughout the closed-form checks: |a-b| shrinks against
// 1+|b| so tiny reference values do not blow the ratio up.
double relative_error(const DenseVector& a, const DenseVector& b);

// --- matrix helpers -------------------------------------------------------

DenseVector matvec(const DenseMatrix& m, const DenseVector& x);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& m);

// --- SPD solves -----------------------------------------------------------

// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
// Throws NotSpd when a pivot drops to or below zero.
DenseMatrix cholesky(const DenseMatrix& a);

// Solve a*x = b for SPD a via Cholesky. Throws DimensionMismatch / NotSpd.
DenseVector spd_solve(const DenseMatrix& a, const DenseVector& b);

// Apply the rank-one downdated inverse to x without forming it:
//   (a - x x^T)^-1 x = a^-1 x / (1 - x^T a^-1 x)
// Throws LeverageSingular when the denominator is within 1e-10 of zero.
DenseVector rank_one_inverse_apply(const DenseMatrix& a, const DenseVector& x);

// --- symmetric eigensolver --------------------------------------------------

// Cyclic Jacobi for symmetric matrices. Eigenvalues land in `values`
// (unordered); when `vectors` is non-null its columns are the matching
// eigenvectors. Throws CovarianceFailure if the off-diagonal mass has not
// vanished after max_sweeps.
void jacobi_eigen_sym(const DenseMatrix& a, DenseVector& values,
                      DenseMatrix* vectors, int max_sweeps = 64);

}  // namespace unprompt
