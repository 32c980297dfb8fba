#include "uedge/linalg.hpp"

#include "uedge/error.hpp"

#include <algorithm>
#include <cmath>

namespace uedge {

SymmetricRoot symmetric_root(const Matrix& V) {
    if (V.rows() != V.cols() || V.rows() == 0) {
        throw StandardizationError("covariance must be a nonempty square matrix");
    }
    const double scale = std::max(1.0, V.cwiseAbs().maxCoeff());
    if ((V - V.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw StandardizationError("covariance matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (V + V.transpose()));
    if (eig.info() != Eigen::Success) throw StandardizationError("eigendecomposition failed");
    const Vector& lam = eig.eigenvalues();
    SymmetricRoot out;
    out.lambda_min = lam.minCoeff();
    out.lambda_max = lam.maxCoeff();
    if (!(out.lambda_min > 1e-12 * std::max(1.0, out.lambda_max))) {
        throw StandardizationError("covariance matrix is singular or not positive definite");
    }
    const Matrix& Q = eig.eigenvectors();
    out.root = Q * lam.cwiseSqrt().asDiagonal() * Q.transpose();
    out.inv_root = Q * lam.cwiseSqrt().cwiseInverse().asDiagonal() * Q.transpose();
    return out;
}

std::pair<double, double> eigen_range(const Matrix& V) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (V + V.transpose()), Eigen::EigenvaluesOnly);
    return {eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff()};
}

} // namespace uedge
