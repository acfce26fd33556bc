#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace geoc {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// A block of n embedding vectors (rows) of dimension d with optional binary
// labels and record ids. Vectors are held in double precision; the binary
// file format stores float32.
struct EmbeddingDataset {
    RowMatrix vectors;
    std::optional<std::vector<std::uint8_t>> labels;
    std::optional<std::vector<std::string>> ids;

    std::size_t size() const { return static_cast<std::size_t>(vectors.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(vectors.cols()); }
    bool has_labels() const { return labels.has_value(); }

    /// Throws InputError if any dataset invariant is violated.
    void validate() const;

    /// Rows [begin, end) with labels and ids sliced alongside.
    EmbeddingDataset rows(std::size_t begin, std::size_t end) const;
};

struct DatasetSplit {
    EmbeddingDataset train;
    EmbeddingDataset eval;

    void validate(bool require_labels) const;
};

/// Contiguous split: the first round(fraction * n) rows train, the rest evaluate.
DatasetSplit split_dataset(const EmbeddingDataset& ds, double train_fraction);

enum class FileFormat { csv, binary };

/// Picks binary for ".bin"/".geoc" extensions and csv otherwise.
FileFormat format_from_path(const std::filesystem::path& path);
FileFormat parse_format(const std::string& name);

EmbeddingDataset read_dataset(const std::filesystem::path& path, FileFormat format);
void write_dataset(const EmbeddingDataset& ds, const std::filesystem::path& path, FileFormat format);

inline EmbeddingDataset read_dataset(const std::filesystem::path& path) {
    return read_dataset(path, format_from_path(path));
}
inline void write_dataset(const EmbeddingDataset& ds, const std::filesystem::path& path) {
    write_dataset(ds, path, format_from_path(path));
}

}  // namespace geoc
