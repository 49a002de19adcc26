#pragma once

#include <Eigen/Dense>

#include <functional>

namespace dcflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Vector/matrix norm order used consistently throughout an analysis run.
enum class NormOrder { One, Two, Inf };

/// Parses 1, 2 or 0 (= infinity); anything else is rejected.
NormOrder norm_order_from_int(int q);
int norm_order_to_int(NormOrder q); // inverse; Inf maps to 0

double vector_norm(const Vec& x, NormOrder q);

/// Induced (operator) matrix norm. One: max absolute column sum,
/// Inf: max absolute row sum, Two: largest singular value, computed via a
/// symmetric eigensolve of MᵀM (or of M itself when M is symmetric).
double induced_norm(const Mat& m, NormOrder q);

/// Smallest eigenvalue of a symmetric matrix. The input must be symmetric to
/// 1e-12 (absolute, on the symmetrized difference); throws std::invalid_argument
/// otherwise.
double min_eigenvalue_sym(const Mat& m);

/// Largest eigenvalue, same contract as min_eigenvalue_sym.
double max_eigenvalue_sym(const Mat& m);

/// Central-difference gradient of a scalar field, (f(x+h e_n) - f(x-h e_n))/2h.
/// Test-oracle quality, not tuned for performance.
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h);

} // namespace dcflow
