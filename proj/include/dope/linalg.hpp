#pragma once

#include <cstddef>
#include <vector>

namespace dope {

// Row-major dense square matrix. Kernel sizes here stay in the low thousands,
// so everything is plain O(n^3) with no blocking.
struct Matrix {
    std::size_t n = 0;
    std::vector<double> a;

    Matrix() = default;
    explicit Matrix(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

Matrix matmul(const Matrix& x, const Matrix& y);

// max_ij |x_ij - y_ij|
double max_abs_diff(const Matrix& x, const Matrix& y);

double trace(const Matrix& x);

// Determinant by LU with partial pivoting (in-place on a copy).
double det_lu(Matrix m);

// Eigenvalues of a symmetric matrix by cyclic Jacobi, ascending order.
std::vector<double> jacobi_eigenvalues(Matrix m, double tol = 1e-14);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dope
