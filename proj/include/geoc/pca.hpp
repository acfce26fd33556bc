#pragma once

#include <Eigen/Dense>

#include "geoc/dataio.hpp"
#include "geoc/linalg.hpp"

namespace geoc {

// Principal directions of a training set. Columns of `components` are
// orthonormal and ordered by descending explained variance.
struct PcaModel {
    Eigen::RowVectorXd mean;
    Eigen::MatrixXd components;  // d x m
    Eigen::VectorXd explained_variance;

    Eigen::Index input_dim() const { return mean.size(); }
    Eigen::Index output_dim() const { return components.cols(); }
};

/// Fits the top-m eigenvectors of the sample covariance (divisor n - 1).
PcaModel pca_fit(const EmbeddingDataset& train, Eigen::Index m, const EigenOptions& options = {});

/// (x - mean) * components for every row; labels and ids carried over.
EmbeddingDataset pca_transform(const PcaModel& model, const EmbeddingDataset& ds);

/// Maps reduced coordinates back to input space: y * components^T + mean.
RowMatrix pca_inverse_transform(const PcaModel& model, const RowMatrix& reduced);

}  // namespace geoc
