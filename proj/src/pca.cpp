#include "geoc/pca.hpp"

#include <string>

#include "geoc/error.hpp"

namespace geoc {

PcaModel pca_fit(const EmbeddingDataset& train, Eigen::Index m, const EigenOptions& options) {
    const auto n = static_cast<Eigen::Index>(train.size());
    const auto d = static_cast<Eigen::Index>(train.dim());
    if (n < 2) throw InputError("PCA needs at least 2 training rows, got " + std::to_string(n));
    if (m < 1 || m > std::min(n, d))
        throw InputError("PCA dimension " + std::to_string(m) + " outside [1, min(n, d)] = [1, " +
                         std::to_string(std::min(n, d)) + "]");

    auto [centered, mean] = center_columns(train.vectors);
    Eigen::MatrixXd covariance = Eigen::MatrixXd(centered.transpose() * centered) / static_cast<double>(n - 1);
    // Mirror the lower triangle so the matrix is exactly symmetric.
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = j + 1; i < d; ++i) covariance(j, i) = covariance(i, j);

    SymmetricEigenResult eig = top_k_symmetric_eigen(covariance, m, options);
    for (Eigen::Index c = 0; c < m; ++c) {
        if (eig.eigenvalues(c) < 0.0) {
            if (eig.eigenvalues(c) < -1e-10 * std::max(1.0, eig.eigenvalues(0)))
                throw NumericalError("covariance has a significantly negative eigenvalue");
            eig.eigenvalues(c) = 0.0;
        }
    }
    return PcaModel{mean, std::move(eig.eigenvectors), std::move(eig.eigenvalues)};
}

EmbeddingDataset pca_transform(const PcaModel& model, const EmbeddingDataset& ds) {
    if (static_cast<Eigen::Index>(ds.dim()) != model.input_dim())
        throw InputError("PCA model expects dimension " + std::to_string(model.input_dim()) + ", got " +
                         std::to_string(ds.dim()));
    EmbeddingDataset out;
    out.vectors = (ds.vectors.rowwise() - model.mean) * model.components;
    out.labels = ds.labels;
    out.ids = ds.ids;
    return out;
}

RowMatrix pca_inverse_transform(const PcaModel& model, const RowMatrix& reduced) {
    if (reduced.cols() != model.output_dim()) throw InputError("reduced dimension does not match PCA model");
    RowMatrix out = reduced * model.components.transpose();
    out.rowwise() += model.mean;
    return out;
}

}  // namespace geoc
