#include "geoc/pipeline.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "byteio.hpp"
#include "geoc/error.hpp"

namespace geoc {

namespace {

constexpr std::string_view kMagic = "GEOR";
constexpr std::uint32_t kVersion = 1;
constexpr std::string_view kPcaTag = "PCA_";
constexpr std::string_view kIsomapTag = "ISOM";
constexpr std::string_view kScaleTag = "ZSCO";

using detail::ByteReader;
using detail::ByteWriter;

void put_matrix(ByteWriter& w, const auto& m) {
    w.u64(static_cast<std::uint64_t>(m.rows()));
    w.u64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) w.f64(m(i, j));
}

template <typename M>
M get_matrix(ByteReader& r) {
    const std::uint64_t rows = r.u64();
    const std::uint64_t cols = r.u64();
    if (cols != 0 && rows > r.remaining() / 8 / cols) throw InputError(r.context() + ": corrupted matrix header");
    M m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = r.f64();
    return m;
}

void put_pca(ByteWriter& w, const PcaModel& model) {
    put_matrix(w, model.mean);
    put_matrix(w, model.components);
    put_matrix(w, model.explained_variance);
}

PcaModel get_pca(ByteReader& r) {
    PcaModel model;
    model.mean = get_matrix<Eigen::RowVectorXd>(r);
    model.components = get_matrix<Eigen::MatrixXd>(r);
    model.explained_variance = get_matrix<Eigen::VectorXd>(r);
    if (model.components.rows() != model.mean.size() || model.explained_variance.size() != model.components.cols())
        throw InputError(r.context() + ": corrupted PCA section");
    return model;
}

void put_isomap(ByteWriter& w, const IsomapModel& model) {
    w.u64(model.m);
    w.u64(model.k);
    w.u64(model.entry_k);
    put_matrix(w, model.train_vectors);
    w.u64(model.graph.n);
    w.u64(model.graph.k);
    for (const auto& list : model.graph.adjacency) {
        w.u64(list.size());
        for (const Edge& e : list) {
            w.u64(e.to);
            w.f64(e.weight);
        }
    }
    w.u64(model.graph.bridged_edges.size());
    for (const BridgedEdge& e : model.graph.bridged_edges) {
        w.u64(e.a);
        w.u64(e.b);
        w.f64(e.weight);
    }
    put_matrix(w, model.geodesics.distances);
    put_matrix(w, model.mds.row_mean_sq);
    w.f64(model.mds.grand_mean_sq);
    put_matrix(w, model.mds.eigenvalues);
    put_matrix(w, model.mds.eigenvectors);
}

IsomapModel get_isomap(ByteReader& r) {
    IsomapModel model;
    model.m = r.u64();
    model.k = r.u64();
    model.entry_k = r.u64();
    model.train_vectors = get_matrix<RowMatrix>(r);
    model.graph.n = r.u64();
    model.graph.k = r.u64();
    const auto n = static_cast<std::uint64_t>(model.train_vectors.rows());
    if (model.graph.n != n) throw InputError(r.context() + ": corrupted Isomap graph");
    model.graph.adjacency.resize(n);
    for (auto& list : model.graph.adjacency) {
        const std::uint64_t degree = r.u64();
        if (degree >= n) throw InputError(r.context() + ": corrupted Isomap graph");
        list.resize(degree);
        for (Edge& e : list) {
            e.to = r.u64();
            e.weight = r.f64();
            if (e.to >= n) throw InputError(r.context() + ": corrupted Isomap graph");
        }
    }
    const std::uint64_t bridges = r.u64();
    if (bridges >= n) throw InputError(r.context() + ": corrupted Isomap graph");
    model.graph.bridged_edges.resize(bridges);
    for (BridgedEdge& e : model.graph.bridged_edges) {
        e.a = r.u64();
        e.b = r.u64();
        e.weight = r.f64();
    }
    model.geodesics.distances = get_matrix<Eigen::MatrixXd>(r);
    model.geodesics.n = n;
    model.mds.row_mean_sq = get_matrix<Eigen::VectorXd>(r);
    model.mds.grand_mean_sq = r.f64();
    model.mds.eigenvalues = get_matrix<Eigen::VectorXd>(r);
    model.mds.eigenvectors = get_matrix<Eigen::MatrixXd>(r);
    const auto sn = static_cast<Eigen::Index>(n);
    const auto m = static_cast<Eigen::Index>(model.m);
    if (model.geodesics.distances.rows() != sn || model.geodesics.distances.cols() != sn ||
        model.mds.row_mean_sq.size() != sn || model.mds.eigenvalues.size() != m || model.mds.eigenvectors.rows() != sn ||
        model.mds.eigenvectors.cols() != m || model.entry_k == 0 || model.entry_k > n)
        throw InputError(r.context() + ": corrupted Isomap section");
    return model;
}

void put_section(ByteWriter& out, std::string_view tag, const ByteWriter& payload) {
    out.bytes(tag);
    out.u64(payload.size());
    out.bytes(std::string_view(payload.data().data(), payload.size()));
}

RowMatrix raw_transform(const FittedReducer& reducer, const EmbeddingDataset& ds, unsigned threads) {
    const auto rows = static_cast<Eigen::Index>(ds.size());
    const auto iso = static_cast<Eigen::Index>(reducer.spec.isomap_dim);
    const auto lin = static_cast<Eigen::Index>(reducer.spec.pca_dim);
    RowMatrix out(rows, iso + lin);
    if (reducer.isomap_model) out.leftCols(iso) = isomap_transform(*reducer.isomap_model, ds, threads).vectors;
    if (reducer.pca_model) out.rightCols(lin) = pca_transform(*reducer.pca_model, ds).vectors;
    return out;
}

}  // namespace

std::string to_string(ReducerKind kind) {
    switch (kind) {
        case ReducerKind::pca: return "pca";
        case ReducerKind::isomap: return "isomap";
        case ReducerKind::concat: return "concat";
    }
    return "unknown";
}

ReducerKind parse_reducer_kind(const std::string& name) {
    if (name == "pca") return ReducerKind::pca;
    if (name == "isomap") return ReducerKind::isomap;
    if (name == "concat") return ReducerKind::concat;
    throw InputError("unknown reducer kind '" + name + "' (expected pca, isomap or concat)");
}

ReducerSpec ReducerSpec::pca(std::size_t dim) {
    ReducerSpec s;
    s.kind = ReducerKind::pca;
    s.total_dim = dim;
    s.pca_dim = dim;
    return s;
}

ReducerSpec ReducerSpec::isomap(std::size_t dim, std::size_t k) {
    ReducerSpec s;
    s.kind = ReducerKind::isomap;
    s.total_dim = dim;
    s.isomap_dim = dim;
    s.k_neighbors = k;
    return s;
}

ReducerSpec ReducerSpec::concat(std::size_t isomap_dim, std::size_t pca_dim, std::size_t k) {
    ReducerSpec s;
    s.kind = ReducerKind::concat;
    s.total_dim = isomap_dim + pca_dim;
    s.isomap_dim = isomap_dim;
    s.pca_dim = pca_dim;
    s.k_neighbors = k;
    return s;
}

void ReducerSpec::validate() const {
    if (total_dim < 1) throw InputError("total dimension must be at least 1");
    if (isomap_dim + pca_dim != total_dim)
        throw InputError("isomap dim " + std::to_string(isomap_dim) + " + pca dim " + std::to_string(pca_dim) +
                         " does not sum to total " + std::to_string(total_dim));
    if (kind == ReducerKind::pca && isomap_dim != 0) throw InputError("pca reducer cannot have an isomap block");
    if (kind == ReducerKind::isomap && pca_dim != 0) throw InputError("isomap reducer cannot have a pca block");
    if (uses_isomap() && k_neighbors < 1) throw InputError("k must be at least 1");
}

std::string ReducerSpec::label() const { return to_string(kind); }

DatasetFingerprint fingerprint(const EmbeddingDataset& ds) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (Eigen::Index i = 0; i < ds.vectors.rows(); ++i) {
        for (Eigen::Index j = 0; j < ds.vectors.cols(); ++j) {
            std::uint64_t bits = std::bit_cast<std::uint64_t>(ds.vectors(i, j));
            for (int b = 0; b < 8; ++b) {
                h ^= bits & 0xff;
                h *= 0x100000001b3ULL;
                bits >>= 8;
            }
        }
    }
    return {ds.size(), ds.dim(), h};
}

FittedReducer fit(const ReducerSpec& spec, const EmbeddingDataset& train, const FitOptions& options) {
    spec.validate();
    train.validate();
    FittedReducer r;
    r.spec = spec;
    r.train_fingerprint = fingerprint(train);
    if (spec.uses_isomap()) {
        IsomapOptions iso;
        iso.entry_k = spec.entry_k;
        iso.threads = options.threads;
        iso.memory_ceiling_bytes = options.memory_ceiling_bytes;
        iso.eigen = options.eigen;
        r.isomap_model = isomap_fit(train, spec.isomap_dim, spec.k_neighbors, iso);
    }
    if (spec.uses_pca()) r.pca_model = pca_fit(train, static_cast<Eigen::Index>(spec.pca_dim), options.eigen);
    if (spec.zscore) {
        const RowMatrix y = raw_transform(r, train, options.threads);
        const Eigen::RowVectorXd mean = y.colwise().mean();
        Eigen::RowVectorXd scale = ((y.rowwise() - mean).cwiseAbs2().colwise().sum() /
                                    static_cast<double>(std::max<std::size_t>(1, train.size() - 1)))
                                       .cwiseSqrt();
        for (Eigen::Index c = 0; c < scale.size(); ++c)
            if (!(scale(c) > 0.0)) scale(c) = 1.0;
        r.column_scaling = std::make_pair(mean, scale);
    }
    return r;
}

EmbeddingDataset transform(const FittedReducer& reducer, const EmbeddingDataset& ds, unsigned threads) {
    if (ds.dim() != reducer.input_dim())
        throw InputError("reducer expects dimension " + std::to_string(reducer.input_dim()) + ", got " +
                         std::to_string(ds.dim()));
    EmbeddingDataset out;
    out.vectors = raw_transform(reducer, ds, threads);
    if (reducer.column_scaling) {
        const auto& [mean, scale] = *reducer.column_scaling;
        out.vectors = ((out.vectors.rowwise() - mean).array().rowwise() / scale.array()).matrix();
    }
    out.labels = ds.labels;
    out.ids = ds.ids;
    return out;
}

// Layout: "GEOR", version u32, spec record, training fingerprint, then tagged
// sections (4-byte tag, u64 payload length, payload). All integers
// little-endian; model parameters float64.
void save_reducer(const FittedReducer& reducer, const std::filesystem::path& path) {
    ByteWriter w;
    w.bytes(kMagic);
    w.u32(kVersion);
    const ReducerSpec& s = reducer.spec;
    w.u32(static_cast<std::uint32_t>(s.kind));
    w.u64(s.total_dim);
    w.u64(s.isomap_dim);
    w.u64(s.pca_dim);
    w.u64(s.k_neighbors);
    w.u64(s.entry_k);
    w.u8(s.zscore ? 1 : 0);
    w.u64(reducer.train_fingerprint.n);
    w.u64(reducer.train_fingerprint.d);
    w.u64(reducer.train_fingerprint.hash);

    std::uint32_t sections = 0;
    sections += reducer.isomap_model.has_value();
    sections += reducer.pca_model.has_value();
    sections += reducer.column_scaling.has_value();
    w.u32(sections);
    if (reducer.isomap_model) {
        ByteWriter payload;
        put_isomap(payload, *reducer.isomap_model);
        put_section(w, kIsomapTag, payload);
    }
    if (reducer.pca_model) {
        ByteWriter payload;
        put_pca(payload, *reducer.pca_model);
        put_section(w, kPcaTag, payload);
    }
    if (reducer.column_scaling) {
        ByteWriter payload;
        put_matrix(payload, reducer.column_scaling->first);
        put_matrix(payload, reducer.column_scaling->second);
        put_section(w, kScaleTag, payload);
    }
    detail::write_file(path.string(), w.data());
}

FittedReducer load_reducer(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw InputError("file not found: " + path.string());
    const std::vector<char> data = detail::read_file(path.string());
    ByteReader r(data.data(), data.size(), path.string());
    if (data.size() < 8 || r.bytes(4) != kMagic) throw InputError(path.string() + ": not a reducer file (bad magic)");
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        throw InputError(path.string() + ": unsupported reducer version " + std::to_string(version));

    FittedReducer out;
    const std::uint32_t kind = r.u32();
    if (kind > static_cast<std::uint32_t>(ReducerKind::concat)) throw InputError(path.string() + ": corrupted spec");
    out.spec.kind = static_cast<ReducerKind>(kind);
    out.spec.total_dim = r.u64();
    out.spec.isomap_dim = r.u64();
    out.spec.pca_dim = r.u64();
    out.spec.k_neighbors = r.u64();
    out.spec.entry_k = r.u64();
    out.spec.zscore = r.u8() != 0;
    out.train_fingerprint.n = r.u64();
    out.train_fingerprint.d = r.u64();
    out.train_fingerprint.hash = r.u64();
    out.spec.validate();

    const std::uint32_t sections = r.u32();
    for (std::uint32_t s = 0; s < sections; ++s) {
        const std::string_view tag = r.bytes(4);
        const std::uint64_t length = r.u64();
        r.need(length);
        const std::size_t start = r.position();
        ByteReader section(data.data() + start, length, path.string() + " [" + std::string(tag) + "]");
        if (tag == kIsomapTag)
            out.isomap_model = get_isomap(section);
        else if (tag == kPcaTag)
            out.pca_model = get_pca(section);
        else if (tag == kScaleTag) {
            auto mean = get_matrix<Eigen::RowVectorXd>(section);
            auto scale = get_matrix<Eigen::RowVectorXd>(section);
            out.column_scaling = std::make_pair(std::move(mean), std::move(scale));
        } else
            throw InputError(path.string() + ": unknown section '" + std::string(tag) + "'");
        if (section.remaining() != 0) throw InputError(path.string() + ": corrupted section '" + std::string(tag) + "'");
        r.bytes(length);
    }
    if (r.remaining() != 0) throw InputError(path.string() + ": trailing bytes after last section");

    const auto d = static_cast<Eigen::Index>(out.train_fingerprint.d);
    if (out.spec.uses_isomap() != out.isomap_model.has_value() || out.spec.uses_pca() != out.pca_model.has_value() ||
        out.spec.zscore != out.column_scaling.has_value())
        throw InputError(path.string() + ": sections do not match the stored spec");
    if (out.pca_model && (out.pca_model->input_dim() != d ||
                          out.pca_model->output_dim() != static_cast<Eigen::Index>(out.spec.pca_dim)))
        throw InputError(path.string() + ": PCA section does not match the stored spec");
    if (out.isomap_model && (out.isomap_model->train_vectors.cols() != d || out.isomap_model->m != out.spec.isomap_dim))
        throw InputError(path.string() + ": Isomap section does not match the stored spec");
    return out;
}

std::vector<Split> table_splits(std::size_t total_dim) {
    std::vector<Split> out;
    for (std::size_t quarter = 0; quarter <= 4; ++quarter) {
        const std::size_t iso = static_cast<std::size_t>(std::llround(static_cast<double>(total_dim) * quarter / 4.0));
        out.emplace_back(iso, total_dim - iso);
    }
    return out;
}

std::vector<Split> ratio_splits(std::size_t total_dim) {
    std::vector<Split> out;
    for (int eighth = 0; eighth <= 4; ++eighth) {
        const double ratio = eighth / 8.0;
        const auto pca = static_cast<std::size_t>(std::llround(static_cast<double>(total_dim) * ratio / (1.0 + ratio)));
        out.emplace_back(total_dim - pca, pca);
    }
    return out;
}

std::vector<std::size_t> pca_sweep_dims() { return {16, 32, 64, 128, 256}; }

}  // namespace geoc
