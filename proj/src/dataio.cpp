#include "geoc/dataio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "byteio.hpp"
#include "geoc/error.hpp"

namespace geoc {

namespace detail {

std::vector<char> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    in.seekg(0, std::ios::end);
    const auto size = static_cast<std::size_t>(in.tellg());
    in.seekg(0, std::ios::beg);
    std::vector<char> data(size);
    if (size > 0 && !in.read(data.data(), static_cast<std::streamsize>(size)))
        throw InputError("cannot read file: " + path);
    return data;
}

void write_file(const std::string& path, const std::vector<char>& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + path);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw InputError("cannot write file: " + path);
}

}  // namespace detail

namespace {

constexpr std::string_view kMagic = "GEOC";
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kFlagLabels = 1u;
constexpr std::size_t kHeaderBytes = 4 + 4 + 8 + 8 + 4;

std::string row_context(const std::string& path, std::size_t row) {
    return path + ": row " + std::to_string(row);
}

// Splits one CSV record. Only the first (id) field may be quoted.
std::vector<std::string_view> split_record(std::string_view line, std::string& id_storage, bool& id_quoted) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    id_quoted = false;
    if (!line.empty() && line.front() == '"') {
        id_quoted = true;
        id_storage.clear();
        std::size_t i = 1;
        for (;;) {
            if (i >= line.size()) throw InputError("unterminated quoted id");
            if (line[i] == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    id_storage.push_back('"');
                    i += 2;
                    continue;
                }
                ++i;
                break;
            }
            id_storage.push_back(line[i++]);
        }
        fields.emplace_back(id_storage);
        if (i < line.size() && line[i] != ',') throw InputError("garbage after quoted id");
        pos = i < line.size() ? i + 1 : line.size() + 1;
    }
    while (pos <= line.size()) {
        const std::size_t comma = line.find(',', pos);
        const std::size_t end = comma == std::string_view::npos ? line.size() : comma;
        fields.push_back(line.substr(pos, end - pos));
        pos = end + 1;
    }
    return fields;
}

double parse_double(std::string_view text, const std::string& context) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw InputError(context + ": cannot parse number '" + std::string(text) + "'");
    if (!std::isfinite(value)) throw InputError(context + ": non-finite value '" + std::string(text) + "'");
    return value;
}

std::uint8_t parse_label(std::string_view text, const std::string& context) {
    while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) text.remove_suffix(1);
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    if (text == "0") return 0;
    if (text == "1") return 1;
    throw InputError(context + ": unknown label value '" + std::string(text) + "'");
}

EmbeddingDataset read_csv(const std::filesystem::path& path) {
    const std::string name = path.string();
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + name);

    std::string line;
    if (!std::getline(in, line)) throw InputError(name + ": malformed header: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::string scratch;
    bool quoted = false;
    const auto header = split_record(line, scratch, quoted);
    if (header.size() < 2 || header.front() != "id")
        throw InputError(name + ": malformed header: expected 'id,f0,...'");
    const bool has_labels = header.back() == "label";
    const std::size_t d = header.size() - 1 - (has_labels ? 1 : 0);
    if (d == 0) throw InputError(name + ": malformed header: no feature columns");
    for (std::size_t j = 0; j < d; ++j) {
        if (header[j + 1] != "f" + std::to_string(j))
            throw InputError(name + ": malformed header: column " + std::to_string(j + 1) + " should be f" +
                             std::to_string(j));
    }

    std::vector<double> values;
    std::vector<std::uint8_t> labels;
    std::vector<std::string> ids;
    bool any_id = false;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string ctx = row_context(name, row);
        std::vector<std::string_view> fields;
        try {
            fields = split_record(line, scratch, quoted);
        } catch (const InputError& e) {
            throw InputError(ctx + ": " + e.what());
        }
        if (fields.size() != header.size())
            throw InputError(ctx + ": expected " + std::to_string(header.size()) + " fields, found " +
                             std::to_string(fields.size()));
        ids.emplace_back(fields[0]);
        any_id = any_id || !fields[0].empty();
        for (std::size_t j = 0; j < d; ++j) values.push_back(parse_double(fields[j + 1], ctx));
        if (has_labels) labels.push_back(parse_label(fields.back(), ctx));
        ++row;
    }
    if (row == 0) throw InputError(name + ": no data rows");

    EmbeddingDataset ds;
    ds.vectors = Eigen::Map<const RowMatrix>(values.data(), static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(d));
    if (has_labels) ds.labels = std::move(labels);
    if (any_id) ds.ids = std::move(ids);
    return ds;
}

EmbeddingDataset read_binary(const std::filesystem::path& path) {
    const std::string name = path.string();
    const std::vector<char> data = detail::read_file(name);
    detail::ByteReader in(data.data(), data.size(), name);
    if (data.size() < kHeaderBytes) throw InputError(name + ": malformed header: file shorter than header");
    if (in.bytes(4) != kMagic) throw InputError(name + ": malformed header: bad magic");
    const std::uint32_t version = in.u32();
    if (version != kVersion) throw InputError(name + ": unsupported format version " + std::to_string(version));
    const std::uint64_t n = in.u64();
    const std::uint64_t d = in.u64();
    const std::uint32_t flags = in.u32();
    if (n == 0 || d == 0) throw InputError(name + ": malformed header: n and d must be positive");
    if ((flags & ~kFlagLabels) != 0) throw InputError(name + ": malformed header: unknown flags");
    const bool has_labels = (flags & kFlagLabels) != 0;

    // Guard the size arithmetic against absurd headers before multiplying.
    const std::uint64_t payload = data.size() - kHeaderBytes;
    if (d > payload / 4 || n > payload / (4 * d))
        throw InputError(name + ": declared n=" + std::to_string(n) + ", d=" + std::to_string(d) +
                         " exceeds payload length");
    const std::uint64_t expected = n * d * 4 + (has_labels ? n : 0);
    if (expected != payload)
        throw InputError(name + ": declared n=" + std::to_string(n) + ", d=" + std::to_string(d) +
                         " disagrees with payload length " + std::to_string(payload));

    EmbeddingDataset ds;
    ds.vectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::uint64_t i = 0; i < n; ++i) {
        for (std::uint64_t j = 0; j < d; ++j) {
            const float v = in.f32();
            if (!std::isfinite(v)) throw InputError(row_context(name, i) + ": non-finite value");
            ds.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    }
    if (has_labels) {
        std::vector<std::uint8_t> labels(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            labels[i] = in.u8();
            if (labels[i] > 1)
                throw InputError(row_context(name, i) + ": unknown label value " + std::to_string(labels[i]));
        }
        ds.labels = std::move(labels);
    }
    return ds;
}

std::string csv_id(const std::string& id) {
    if (id.find_first_of(",\"\n\r") == std::string::npos) return id;
    std::string out = "\"";
    for (char c : id) {
        if (c == '\n' || c == '\r') throw InputError("record id contains a line break: " + id);
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_csv(const EmbeddingDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + path.string());
    out << "id";
    for (std::size_t j = 0; j < ds.dim(); ++j) out << ",f" << j;
    if (ds.labels) out << ",label";
    out << '\n';
    char buf[32];
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds.ids) out << csv_id((*ds.ids)[i]);
        for (std::size_t j = 0; j < ds.dim(); ++j) {
            std::snprintf(buf, sizeof buf, "%.9g", ds.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            out << ',' << buf;
        }
        if (ds.labels) out << ',' << static_cast<int>((*ds.labels)[i]);
        out << '\n';
    }
    if (!out) throw InputError("cannot write file: " + path.string());
}

void write_binary(const EmbeddingDataset& ds, const std::filesystem::path& path) {
    detail::ByteWriter w;
    w.bytes(kMagic);
    w.u32(kVersion);
    w.u64(ds.size());
    w.u64(ds.dim());
    w.u32(ds.labels ? kFlagLabels : 0u);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < ds.dim(); ++j) {
            const float v = static_cast<float>(ds.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            if (!std::isfinite(v)) throw InputError("row " + std::to_string(i) + ": value overflows float32");
            w.f32(v);
        }
    }
    if (ds.labels)
        for (std::uint8_t l : *ds.labels) w.u8(l);
    detail::write_file(path.string(), w.data());
}

}  // namespace

void EmbeddingDataset::validate() const {
    if (vectors.rows() < 1) throw InputError("dataset must contain at least one row");
    if (vectors.cols() < 1) throw InputError("dataset dimension must be at least 1");
    for (Eigen::Index i = 0; i < vectors.rows(); ++i)
        if (!vectors.row(i).allFinite()) throw InputError("row " + std::to_string(i) + ": non-finite value");
    if (labels) {
        if (labels->size() != size())
            throw InputError("label count " + std::to_string(labels->size()) + " does not match row count " +
                             std::to_string(size()));
        for (std::size_t i = 0; i < labels->size(); ++i)
            if ((*labels)[i] > 1) throw InputError("row " + std::to_string(i) + ": unknown label value");
    }
    if (ids && ids->size() != size()) throw InputError("id count does not match row count");
}

EmbeddingDataset EmbeddingDataset::rows(std::size_t begin, std::size_t end) const {
    if (begin > end || end > size()) throw InputError("row range out of bounds");
    EmbeddingDataset out;
    out.vectors = vectors.middleRows(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin));
    if (labels) out.labels = std::vector<std::uint8_t>(labels->begin() + begin, labels->begin() + end);
    if (ids) out.ids = std::vector<std::string>(ids->begin() + begin, ids->begin() + end);
    return out;
}

void DatasetSplit::validate(bool require_labels) const {
    train.validate();
    eval.validate();
    if (train.dim() != eval.dim())
        throw InputError("train dimension " + std::to_string(train.dim()) + " differs from eval dimension " +
                         std::to_string(eval.dim()));
    if (require_labels && (!train.has_labels() || !eval.has_labels())) throw InputError("labels required");
}

DatasetSplit split_dataset(const EmbeddingDataset& ds, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw InputError("train fraction must lie in (0, 1)");
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(ds.size())));
    if (n_train < 1 || n_train >= ds.size()) throw InputError("split leaves an empty partition");
    return {ds.rows(0, n_train), ds.rows(n_train, ds.size())};
}

FileFormat format_from_path(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    return (ext == ".bin" || ext == ".geoc") ? FileFormat::binary : FileFormat::csv;
}

FileFormat parse_format(const std::string& name) {
    if (name == "csv") return FileFormat::csv;
    if (name == "binary" || name == "bin") return FileFormat::binary;
    throw InputError("unknown format '" + name + "' (expected csv or binary)");
}

EmbeddingDataset read_dataset(const std::filesystem::path& path, FileFormat format) {
    if (!std::filesystem::exists(path)) throw InputError("file not found: " + path.string());
    EmbeddingDataset ds = format == FileFormat::csv ? read_csv(path) : read_binary(path);
    ds.validate();
    return ds;
}

void write_dataset(const EmbeddingDataset& ds, const std::filesystem::path& path, FileFormat format) {
    ds.validate();
    if (format == FileFormat::csv)
        write_csv(ds, path);
    else
        write_binary(ds, path);
}

}  // namespace geoc
