#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geoc/dataio.hpp"
#include "geoc/isomap.hpp"
#include "geoc/pca.hpp"

namespace geoc {

enum class ReducerKind : std::uint32_t { pca = 0, isomap = 1, concat = 2 };

std::string to_string(ReducerKind kind);
ReducerKind parse_reducer_kind(const std::string& name);

// What to fit. For pure kinds the unused block dimension is zero; concat with
// one empty block behaves exactly like the corresponding pure kind.
struct ReducerSpec {
    ReducerKind kind = ReducerKind::pca;
    std::size_t total_dim = 0;
    std::size_t isomap_dim = 0;
    std::size_t pca_dim = 0;
    std::size_t k_neighbors = 96;
    std::size_t entry_k = 0;  // 0: same as k_neighbors
    bool zscore = false;      // per-column standardization of the output

    static ReducerSpec pca(std::size_t dim);
    static ReducerSpec isomap(std::size_t dim, std::size_t k = 96);
    static ReducerSpec concat(std::size_t isomap_dim, std::size_t pca_dim, std::size_t k = 96);

    void validate() const;
    bool uses_pca() const { return pca_dim > 0; }
    bool uses_isomap() const { return isomap_dim > 0; }
    /// Short label such as "pca", "isomap" or "concat".
    std::string label() const;
};

struct DatasetFingerprint {
    std::uint64_t n = 0;
    std::uint64_t d = 0;
    std::uint64_t hash = 0;  // FNV-1a over the row-major float64 bit patterns

    bool operator==(const DatasetFingerprint&) const = default;
};

DatasetFingerprint fingerprint(const EmbeddingDataset& ds);

struct FitOptions {
    unsigned threads = 0;
    std::uint64_t memory_ceiling_bytes = 2ULL << 30;
    EigenOptions eigen;
};

struct FittedReducer {
    ReducerSpec spec;
    std::optional<PcaModel> pca_model;
    std::optional<IsomapModel> isomap_model;
    DatasetFingerprint train_fingerprint;
    // Present when spec.zscore is set.
    std::optional<std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd>> column_scaling;

    std::size_t input_dim() const { return static_cast<std::size_t>(train_fingerprint.d); }
    std::size_t output_dim() const { return spec.total_dim; }
};

FittedReducer fit(const ReducerSpec& spec, const EmbeddingDataset& train, const FitOptions& options = {});

/// [isomap block | pca block], labels and ids preserved.
EmbeddingDataset transform(const FittedReducer& reducer, const EmbeddingDataset& ds, unsigned threads = 0);

void save_reducer(const FittedReducer& reducer, const std::filesystem::path& path);
FittedReducer load_reducer(const std::filesystem::path& path);

/// (isomap_dim, pca_dim) pairs.
using Split = std::pair<std::size_t, std::size_t>;

/// Isomap shares 0, 1/4, 1/2, 3/4 and 1 of the total: for 64 this gives
/// (0,64), (16,48), (32,32), (48,16), (64,0).
std::vector<Split> table_splits(std::size_t total_dim = 64);

/// PCA-to-Isomap size ratios 0, 1/8, ..., 1/2 at a fixed total, rounded to
/// whole dimensions.
std::vector<Split> ratio_splits(std::size_t total_dim = 64);

/// PCA dimensions evaluated by the dimension sweep.
std::vector<std::size_t> pca_sweep_dims();

}  // namespace geoc
