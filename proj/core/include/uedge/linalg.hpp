#pragma once

#include <Eigen/Dense>

namespace uedge {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric square root of an SPD matrix and its inverse, via eigendecomposition.
struct SymmetricRoot {
    Matrix root;
    Matrix inv_root;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

/// Throws StandardizationError when V is not symmetric (relative 1e-10)
/// or not positive definite (lambda_min <= 1e-12 * max(1, lambda_max)).
SymmetricRoot symmetric_root(const Matrix& V);

/// Smallest and largest eigenvalues of a symmetric matrix.
std::pair<double, double> eigen_range(const Matrix& V);

} // namespace uedge
