#include "geoc/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "geoc/error.hpp"
#include "geoc/random.hpp"

namespace geoc {

namespace {

void check_square_symmetric(const Eigen::MatrixXd& a, const EigenOptions& options) {
    if (a.rows() != a.cols())
        throw InputError("eigendecomposition needs a square matrix, got " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
    if (a.rows() == 0) throw InputError("eigendecomposition of an empty matrix");
    if (!a.allFinite()) throw NumericalError("eigendecomposition input contains non-finite values");
    const double scale = std::max(1.0, inf_norm(a));
    double worst = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = j + 1; i < a.rows(); ++i) worst = std::max(worst, std::abs(a(i, j) - a(j, i)));
    if (worst > options.symmetry_tol * scale) {
        std::ostringstream msg;
        msg << "matrix is not symmetric: max |A - A^T| = " << worst;
        throw InputError(msg.str());
    }
}

void check_k(const Eigen::MatrixXd& a, Eigen::Index k) {
    if (k < 1 || k > a.rows())
        throw InputError("requested " + std::to_string(k) + " eigenpairs from a " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.rows()) + " matrix");
}

SymmetricEigenResult dense_top_k(const Eigen::MatrixXd& a, Eigen::Index k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
    const Eigen::Index n = a.rows();
    SymmetricEigenResult out;
    out.eigenvalues.resize(k);
    out.eigenvectors.resize(n, k);
    for (Eigen::Index c = 0; c < k; ++c) {
        out.eigenvalues(c) = solver.eigenvalues()(n - 1 - c);
        out.eigenvectors.col(c) = solver.eigenvectors().col(n - 1 - c);
    }
    fix_eigenvector_signs(out.eigenvectors);
    return out;
}

// Orthogonalizes v against the first `cols` columns of basis (two passes of
// classical Gram-Schmidt) and returns the remaining norm.
double orthogonalize(Eigen::VectorXd& v, const Eigen::MatrixXd& basis, Eigen::Index cols) {
    for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd coeff = basis.leftCols(cols).transpose() * v;
        v.noalias() -= basis.leftCols(cols) * coeff;
    }
    return v.norm();
}

}  // namespace

double inf_norm(const Eigen::MatrixXd& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

void fix_eigenvector_signs(Eigen::MatrixXd& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            const double v = std::abs(vectors(i, c));
            if (v > best_abs) {
                best_abs = v;
                best = i;
            }
        }
        if (vectors(best, c) < 0.0) vectors.col(c) *= -1.0;
    }
}

SymmetricEigenResult top_k_symmetric_eigen(const Eigen::MatrixXd& a, Eigen::Index k, const EigenOptions& options) {
    check_square_symmetric(a, options);
    check_k(a, k);
    if (a.rows() <= options.dense_threshold) return dense_top_k(a, k);
    return lanczos_top_k(a, k, options);
}

// Thick-restart Lanczos with full reorthogonalization. The basis V and its
// image W = A V are kept explicitly, so the projected matrix is formed as
// V^T W and every restart simply keeps the leading Ritz vectors.
SymmetricEigenResult lanczos_top_k(const Eigen::MatrixXd& a, Eigen::Index k, const EigenOptions& options) {
    check_square_symmetric(a, options);
    check_k(a, k);
    const Eigen::Index n = a.rows();
    const double scale = std::max(1.0, inf_norm(a));
    const double target = options.residual_tol * scale;
    const Eigen::Index max_dim = std::min(n, std::max<Eigen::Index>(2 * k + 1, k + 30));
    const Eigen::Index keep = std::min(max_dim - 1, std::max(k, k + (max_dim - k) / 2));
    const int budget = std::max(1, options.restarts_per_pair * static_cast<int>(k));

    Eigen::MatrixXd basis(n, max_dim);
    Eigen::MatrixXd image(n, max_dim);
    SplitMix64 rng(0x1a2b3c4d5e6fULL);
    auto random_unit = [&](Eigen::Index cols) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            Eigen::VectorXd v(n);
            for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.gaussian();
            const double norm = orthogonalize(v, basis, cols);
            if (norm > 1e-8) return Eigen::VectorXd(v / norm);
        }
        throw NumericalError("Lanczos could not extend an orthonormal basis");
    };

    basis.col(0) = random_unit(0);
    image.col(0).noalias() = a * basis.col(0);
    Eigen::Index cols = 1;

    double achieved = 0.0;
    for (int restart = 0;; ++restart) {
        while (cols < max_dim) {
            Eigen::VectorXd next = image.col(cols - 1);
            const double norm = orthogonalize(next, basis, cols);
            if (norm > 1e-12 * scale)
                next /= norm;
            else
                next = random_unit(cols);  // invariant subspace reached
            basis.col(cols) = next;
            image.col(cols).noalias() = a * next;
            ++cols;
        }

        Eigen::MatrixXd projected = basis.leftCols(cols).transpose() * image.leftCols(cols);
        projected = 0.5 * (projected + projected.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(projected);
        if (small.info() != Eigen::Success) throw NumericalError("projected eigenproblem did not converge");

        // Descending order.
        const Eigen::MatrixXd rotation = small.eigenvectors().rowwise().reverse();
        const Eigen::VectorXd theta = small.eigenvalues().reverse();
        const Eigen::MatrixXd ritz = basis.leftCols(cols) * rotation;
        const Eigen::MatrixXd ritz_image = image.leftCols(cols) * rotation;

        achieved = 0.0;
        for (Eigen::Index c = 0; c < k; ++c)
            achieved = std::max(achieved, (ritz_image.col(c) - theta(c) * ritz.col(c)).norm());

        if (achieved <= target || cols == n) {
            SymmetricEigenResult out;
            out.eigenvalues = theta.head(k);
            out.eigenvectors = ritz.leftCols(k);
            fix_eigenvector_signs(out.eigenvectors);
            return out;
        }
        if (restart + 1 >= budget) {
            std::ostringstream msg;
            msg << "Lanczos did not converge after " << budget << " restarts (residual " << achieved << ", target "
                << target << ")";
            throw NumericalError(msg.str());
        }

        basis.leftCols(keep) = ritz.leftCols(keep);
        image.leftCols(keep) = ritz_image.leftCols(keep);
        cols = keep;
    }
}

std::pair<RowMatrix, Eigen::RowVectorXd> center_columns(const RowMatrix& m) {
    if (m.rows() < 1 || m.cols() < 1) throw InputError("cannot center an empty matrix");
    const Eigen::RowVectorXd mean = m.colwise().mean();
    RowMatrix centered = m.rowwise() - mean;
    return {std::move(centered), mean};
}

}  // namespace geoc
