#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <utility>

#include "geoc/dataio.hpp"

namespace geoc {

// Top eigenpairs of a real symmetric matrix, eigenvalues descending.
struct SymmetricEigenResult {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // one orthonormal column per eigenvalue
};

struct EigenOptions {
    // Matrices up to this order use a full tridiagonal QR decomposition; larger
    // ones use restarted Lanczos for the leading k pairs.
    Eigen::Index dense_threshold = 2000;
    // Restart budget for the iterative path, as a multiple of k.
    int restarts_per_pair = 10;
    // Residual target relative to max(1, ||A||_inf) for the iterative path.
    double residual_tol = 1e-10;
    // Allowed |A - A^T| relative to max(1, ||A||_inf).
    double symmetry_tol = 1e-9;
};

/// The k algebraically largest eigenpairs of a symmetric matrix. Within each
/// eigenvector the entry of largest magnitude is positive (lowest index wins ties).
SymmetricEigenResult top_k_symmetric_eigen(const Eigen::MatrixXd& a, Eigen::Index k, const EigenOptions& options = {});

/// Forces the restarted Lanczos route regardless of size.
SymmetricEigenResult lanczos_top_k(const Eigen::MatrixXd& a, Eigen::Index k, const EigenOptions& options = {});

/// Applies the sign convention to every column in place.
void fix_eigenvector_signs(Eigen::MatrixXd& vectors);

/// Infinity norm (maximum absolute row sum).
double inf_norm(const Eigen::MatrixXd& a);

/// Returns the column-centered matrix and the column means.
std::pair<RowMatrix, Eigen::RowVectorXd> center_columns(const RowMatrix& m);

}  // namespace geoc
