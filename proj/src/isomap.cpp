#include "geoc/isomap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "geoc/error.hpp"
#include "geoc/parallel.hpp"

namespace geoc {

namespace {

// Eigenvalues at or below this fraction of the largest magnitude are treated
// as zero when counting the positive spectrum.
constexpr double kPositiveRelTol = 1e-10;

}  // namespace

RowMatrix MdsEmbedding::coordinates() const {
    RowMatrix y(eigenvectors.rows(), eigenvectors.cols());
    for (Eigen::Index c = 0; c < eigenvectors.cols(); ++c) y.col(c) = std::sqrt(eigenvalues(c)) * eigenvectors.col(c);
    return y;
}

Eigen::MatrixXd double_center(const Eigen::MatrixXd& distances) {
    const Eigen::Index n = distances.rows();
    if (n != distances.cols() || n == 0) throw InputError("distance matrix must be square and non-empty");
    Eigen::MatrixXd b = distances.cwiseAbs2();
    const Eigen::VectorXd row_mean = b.rowwise().mean();
    const double grand = row_mean.mean();
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j; i < n; ++i) {
            const double v = -0.5 * (b(i, j) - row_mean(i) - row_mean(j) + grand);
            b(i, j) = v;
            b(j, i) = v;
        }
    }
    return b;
}

MdsEmbedding classical_mds(const Eigen::MatrixXd& distances, Eigen::Index m, const EigenOptions& options) {
    const Eigen::Index n = distances.rows();
    if (m < 1 || m >= n)
        throw InputError("embedding dimension " + std::to_string(m) + " outside [1, n-1] for n=" + std::to_string(n));

    MdsEmbedding out;
    out.row_mean_sq = distances.cwiseAbs2().rowwise().mean();
    out.grand_mean_sq = out.row_mean_sq.mean();

    const Eigen::MatrixXd gram = double_center(distances);
    SymmetricEigenResult eig = top_k_symmetric_eigen(gram, m, options);

    const double scale = std::max(std::abs(eig.eigenvalues(0)), std::numeric_limits<double>::min());
    Eigen::Index positive = 0;
    while (positive < m && eig.eigenvalues(positive) > kPositiveRelTol * scale) ++positive;
    if (positive < m) {
        std::ostringstream msg;
        msg << "requested " << m << " dimensions but the Gram matrix has only " << positive
            << " positive eigenvalues among the leading " << m;
        throw InputError(msg.str());
    }
    out.eigenvalues = std::move(eig.eigenvalues);
    out.eigenvectors = std::move(eig.eigenvectors);
    return out;
}

IsomapModel isomap_fit(const EmbeddingDataset& train, std::size_t m, std::size_t k, const IsomapOptions& options) {
    train.validate();
    const std::size_t n = train.size();
    if (m < 1 || m + 1 > n)
        throw InputError("Isomap dimension " + std::to_string(m) + " outside [1, n-1] for n=" + std::to_string(n));

    IsomapModel model;
    model.m = m;
    model.k = k;
    model.entry_k = options.entry_k == 0 ? k : options.entry_k;
    if (model.entry_k > n)
        throw InputError("entry_k=" + std::to_string(model.entry_k) + " exceeds training size " + std::to_string(n));
    model.train_vectors = train.vectors;
    model.graph = build_knn_graph(train, k, options.threads);
    model.geodesics = all_pairs_geodesic(model.graph, {options.threads, options.memory_ceiling_bytes});
    // The Gram matrix is a second n x n allocation.
    if (static_cast<std::uint64_t>(n) * n * sizeof(double) * 2 > options.memory_ceiling_bytes)
        throw ResourceError("Isomap for n=" + std::to_string(n) + " exceeds the memory ceiling");
    model.mds = classical_mds(model.geodesics.distances, static_cast<Eigen::Index>(m), options.eigen);
    return model;
}

EmbeddingDataset isomap_transform(const IsomapModel& model, const EmbeddingDataset& ds, unsigned threads) {
    if (ds.dim() != model.input_dim())
        throw InputError("Isomap model expects dimension " + std::to_string(model.input_dim()) + ", got " +
                         std::to_string(ds.dim()));
    const auto n_train = static_cast<std::size_t>(model.train_vectors.rows());
    const auto m = static_cast<Eigen::Index>(model.m);
    const Eigen::VectorXd inv_sqrt_lambda = model.mds.eigenvalues.cwiseSqrt().cwiseInverse();

    EmbeddingDataset out;
    out.vectors.resize(static_cast<Eigen::Index>(ds.size()), m);
    out.labels = ds.labels;
    out.ids = ds.ids;

    parallel_for(ds.size(), threads, [&](std::size_t r) {
        const auto x = ds.vectors.row(static_cast<Eigen::Index>(r));
        std::vector<std::pair<double, std::size_t>> nearest(n_train);
        for (std::size_t i = 0; i < n_train; ++i)
            nearest[i] = {(x - model.train_vectors.row(static_cast<Eigen::Index>(i))).squaredNorm(), i};
        const auto cut = nearest.begin() + static_cast<std::ptrdiff_t>(model.entry_k);
        std::nth_element(nearest.begin(), cut - 1, nearest.end());
        std::sort(nearest.begin(), cut);

        std::vector<EntryEdge> entry;
        entry.reserve(model.entry_k);
        for (auto it = nearest.begin(); it != cut; ++it) entry.push_back({it->second, std::sqrt(it->first)});
        const std::vector<double> delta = single_source_geodesic(model.geodesics, entry);

        Eigen::VectorXd delta_sq(static_cast<Eigen::Index>(n_train));
        for (std::size_t i = 0; i < n_train; ++i) delta_sq(static_cast<Eigen::Index>(i)) = delta[i] * delta[i];
        const double mean_delta_sq = delta_sq.mean();
        const Eigen::VectorXd kernel =
            -0.5 * (delta_sq - model.mds.row_mean_sq).array() - 0.5 * (model.mds.grand_mean_sq - mean_delta_sq);
        const Eigen::VectorXd coords = (model.mds.eigenvectors.transpose() * kernel).cwiseProduct(inv_sqrt_lambda);
        out.vectors.row(static_cast<Eigen::Index>(r)) = coords.transpose();
    });
    return out;
}

}  // namespace geoc
