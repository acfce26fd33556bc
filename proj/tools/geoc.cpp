// geoc: generate fixtures, fit reducers, evaluate and sweep.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "geoc/dataio.hpp"
#include "geoc/error.hpp"
#include "geoc/geodesic.hpp"
#include "geoc/metrics.hpp"
#include "geoc/parallel.hpp"
#include "geoc/pipeline.hpp"
#include "geoc/synth.hpp"

namespace {

using namespace geoc;

struct Common {
    std::uint64_t seed = 17;
    unsigned threads = 0;
    std::uint64_t memory_ceiling = 2ULL << 30;
    std::string config;
};

struct SpecArgs {
    std::string kind = "concat";
    std::size_t dim = 0;
    std::size_t isomap_dim = 16;
    std::size_t pca_dim = 48;
    std::size_t k = 96;
    std::size_t entry_k = 0;
    bool zscore = false;
};

struct DataArgs {
    std::string train;
    std::string eval;
    double train_fraction = 0.8;
};

struct TrainArgs {
    double lr = 1e-4;
    int epochs = 50;
    std::size_t batch_size = 32;
    std::size_t runs = 3;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Seed for every random draw")->capture_default_str();
    cmd->add_option("--threads", c.threads, "Worker threads (0: GEOC_THREADS, else all cores)")->capture_default_str();
    cmd->add_option("--memory-ceiling", c.memory_ceiling, "Largest n x n allocation, e.g. 2GB")
        ->transform(CLI::AsSizeValue(false))
        ->capture_default_str();
    cmd->add_option("--config", c.config, "File of key = value lines; flags override it");
}

void add_spec(CLI::App* cmd, SpecArgs& s, bool with_kind) {
    if (with_kind)
        cmd->add_option("--kind", s.kind, "Reducer: pca, isomap or concat")
            ->check(CLI::IsMember({"pca", "isomap", "concat"}))
            ->capture_default_str();
    cmd->add_option("--dim", s.dim, "Output dimension for pca and isomap; optional total check for concat")
        ->capture_default_str();
    if (with_kind) {
        cmd->add_option("--isomap-dim", s.isomap_dim, "Isomap block width for concat")->capture_default_str();
        cmd->add_option("--pca-dim", s.pca_dim, "PCA block width for concat")->capture_default_str();
    }
    cmd->add_option("--k", s.k, "Neighbors per point in the Isomap graph")->capture_default_str();
    cmd->add_option("--entry-k", s.entry_k, "Training neighbors linking new points (0: same as --k)")
        ->capture_default_str();
    cmd->add_flag("--zscore", s.zscore, "Standardize each output column on the training set");
}

void add_data(CLI::App* cmd, DataArgs& d) {
    cmd->add_option("--train", d.train, "Labeled training dataset (.csv, .bin or .geoc)");
    cmd->add_option("--eval", d.eval, "Labeled evaluation dataset; if absent --train is split");
    cmd->add_option("--train-fraction", d.train_fraction, "Leading share of --train used for training when --eval is absent")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
}

void add_training(CLI::App* cmd, TrainArgs& t) {
    cmd->add_option("--lr", t.lr, "Adam learning rate")->capture_default_str();
    cmd->add_option("--epochs", t.epochs, "Training epochs")->capture_default_str();
    cmd->add_option("--batch-size", t.batch_size, "Mini-batch size")->capture_default_str();
    cmd->add_option("--runs", t.runs, "Classifier runs (seeds seed, seed+1, ...)")->capture_default_str();
}

ReducerSpec build_spec(const SpecArgs& s) {
    ReducerSpec spec;
    const ReducerKind kind = parse_reducer_kind(s.kind);
    switch (kind) {
        case ReducerKind::pca:
        case ReducerKind::isomap:
            if (s.dim == 0) throw InputError("--dim is required for kind " + s.kind);
            spec = kind == ReducerKind::pca ? ReducerSpec::pca(s.dim) : ReducerSpec::isomap(s.dim, s.k);
            break;
        case ReducerKind::concat:
            spec = ReducerSpec::concat(s.isomap_dim, s.pca_dim, s.k);
            if (s.dim) spec.total_dim = s.dim;
            break;
    }
    spec.k_neighbors = s.k;
    spec.entry_k = s.entry_k;
    spec.zscore = s.zscore;
    spec.validate();
    return spec;
}

DatasetSplit load_split(const DataArgs& d) {
    if (d.train.empty()) throw InputError("--train is required");
    EmbeddingDataset train = read_dataset(d.train);
    if (d.eval.empty()) return split_dataset(train, d.train_fraction);
    DatasetSplit split;
    split.train = std::move(train);
    split.eval = read_dataset(d.eval);
    return split;
}

TrainConfig build_train_config(const TrainArgs& t, const Common& c) {
    TrainConfig cfg;
    cfg.learning_rate = t.lr;
    cfg.epochs = t.epochs;
    cfg.batch_size = t.batch_size;
    cfg.seed = c.seed;
    return cfg;
}

FitOptions fit_options(const Common& c) {
    FitOptions f;
    f.threads = c.threads;
    f.memory_ceiling_bytes = c.memory_ceiling;
    return f;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

void print_report(const EvalReport& r) {
    std::cout << "spec " << r.spec.label() << " isomap_dim=" << r.spec.isomap_dim << " pca_dim=" << r.spec.pca_dim;
    if (r.spec.uses_isomap()) std::cout << " k=" << r.spec.k_neighbors;
    std::cout << "\n  seed  accuracy  matthews\n";
    for (const RunResult& run : r.runs) {
        char line[80];
        std::snprintf(line, sizeof line, "  %4llu  %8.4f  %8.4f\n", static_cast<unsigned long long>(run.seed),
                      run.accuracy, run.matthews);
        std::cout << line;
    }
    std::cout << "  mean  " << fmt(r.mean_accuracy) << "    " << fmt(r.mean_matthews) << "\n";
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
    std::string kind = "moons";
    std::size_t n = 600;
    std::size_t dim = 768;
    double noise = 0.05;
    double warp = 1.0;
    std::string out;
    std::string latent_out;
};

int run_gen(const GenArgs& g, const Common& c) {
    if (g.out.empty()) throw InputError("--out is required");
    ManifoldSample sample;
    if (g.kind == "swiss-roll") {
        sample = gen_swiss_roll(g.n, g.noise, c.seed);
    } else if (g.kind == "moons") {
        MoonsOptions opts;
        opts.noise = g.noise;
        opts.warp = g.warp;
        sample = gen_lifted_moons(g.n, g.dim, c.seed, opts);
    } else {
        sample = gen_line(g.n, g.dim, c.seed);
    }
    write_dataset(sample.dataset, g.out);
    if (!g.latent_out.empty()) write_latent_csv(sample, g.latent_out);
    std::cout << "wrote " << g.out << " (n=" << sample.dataset.size() << ", d=" << sample.dataset.dim()
              << (sample.dataset.has_labels() ? ", labeled" : "") << ")\n";
    return 0;
}

// --- reduce ----------------------------------------------------------------

struct ReduceArgs {
    std::string out;
    std::string apply;
    std::string apply_out;
    std::string train_out;
    std::string dump_graph;
    std::string dump_geodesic;
};

int run_reduce(const SpecArgs& s, const DataArgs& d, const ReduceArgs& r, const Common& c) {
    if (d.train.empty()) throw InputError("--train is required");
    if (r.out.empty()) throw InputError("--out is required");
    if (r.apply.empty() != r.apply_out.empty()) throw InputError("--apply and --apply-out go together");
    const ReducerSpec spec = build_spec(s);
    const EmbeddingDataset train = read_dataset(d.train);
    std::optional<EmbeddingDataset> apply;
    if (!r.apply.empty()) apply = read_dataset(r.apply);

    const FittedReducer reducer = fit(spec, train, fit_options(c));
    save_reducer(reducer, r.out);

    std::cout << "reducer " << spec.label() << ": input_dim=" << reducer.input_dim()
              << " isomap_dim=" << spec.isomap_dim << " pca_dim=" << spec.pca_dim
              << " output_dim=" << reducer.output_dim() << "\n";
    if (reducer.isomap_model) {
        const IsomapModel& iso = *reducer.isomap_model;
        std::cout << "graph: n=" << iso.graph.n << " k=" << iso.k << " edges=" << iso.graph.edge_count()
                  << " bridged_edges=" << iso.graph.bridged_edges.size() << "\n";
        std::cout << "positive spectrum: " << iso.mds.eigenvalues.size() << " of " << iso.m
                  << " retained eigenvalues (smallest " << iso.mds.eigenvalues.minCoeff() << ")\n";
        if (!r.dump_graph.empty()) write_edge_list(iso.graph, r.dump_graph);
        if (!r.dump_geodesic.empty()) write_geodesic_matrix(iso.geodesics, r.dump_geodesic);
    } else if (!r.dump_graph.empty() || !r.dump_geodesic.empty()) {
        throw InputError("--dump-graph and --dump-geodesic need an Isomap block");
    }
    if (!r.train_out.empty()) write_dataset(transform(reducer, train, c.threads), r.train_out);
    if (apply) write_dataset(transform(reducer, *apply, c.threads), r.apply_out);
    std::cout << "wrote " << r.out << "\n";
    return 0;
}

// --- eval ------------------------------------------------------------------

int run_eval(const SpecArgs& s, const DataArgs& d, const TrainArgs& t, const std::string& reducer_path,
             const std::string& out, const Common& c) {
    const DatasetSplit split = load_split(d);
    split.validate(true);
    const TrainConfig cfg = build_train_config(t, c);
    EvalOptions opts;
    opts.n_runs = t.runs;
    opts.threads = c.threads;
    opts.fit = fit_options(c);
    const EvalReport report = reducer_path.empty() ? evaluate(build_spec(s), split, cfg, opts)
                                                   : evaluate(load_reducer(reducer_path), split, cfg, opts);
    print_report(report);
    if (!out.empty()) {
        write_report_csv(report, out);
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
    std::string kind = "concat-splits";
    std::size_t total = 64;
    std::string out;
};

int run_sweep(const SweepArgs& w, const SpecArgs& s, const DataArgs& d, const TrainArgs& t, const Common& c) {
    if (w.out.empty()) throw InputError("--out is required");
    const DatasetSplit split = load_split(d);
    split.validate(true);
    const TrainConfig cfg = build_train_config(t, c);
    EvalOptions opts;
    opts.n_runs = t.runs;
    opts.threads = c.threads;
    opts.fit = fit_options(c);

    std::vector<std::pair<std::string, ReducerSpec>> rows;
    if (w.kind == "pca-dims") {
        for (std::size_t dim : pca_sweep_dims()) rows.emplace_back(std::to_string(dim), ReducerSpec::pca(dim));
    } else {
        const auto splits = w.kind == "concat-splits" ? table_splits(w.total) : ratio_splits(w.total);
        for (const auto& [iso, pca] : splits)
            rows.emplace_back(std::to_string(iso) + "/" + std::to_string(pca), ReducerSpec::concat(iso, pca, s.k));
    }

    std::ofstream csv(w.out, std::ios::trunc);
    if (!csv) throw InputError("cannot write file: " + w.out);
    csv << "dim_or_split,mean_accuracy,mean_matthews\n";
    std::optional<int> first_failure;
    std::size_t failures = 0;
    for (auto& [label, spec] : rows) {
        spec.entry_k = s.entry_k;
        spec.zscore = s.zscore;
        char line[128];
        try {
            const EvalReport report = evaluate(spec, split, cfg, opts);
            std::snprintf(line, sizeof line, "%s,%.9g,%.9g\n", label.c_str(), report.mean_accuracy, report.mean_matthews);
            std::cout << label << ": accuracy " << fmt(report.mean_accuracy) << ", matthews "
                      << fmt(report.mean_matthews) << "\n";
        } catch (const Error& e) {
            std::snprintf(line, sizeof line, "%s,nan,nan\n", label.c_str());
            std::cerr << label << ": failed: " << e.what() << "\n";
            if (!first_failure) first_failure = static_cast<int>(e.kind());
            ++failures;
        }
        csv << line;
    }
    if (!csv) throw InputError("cannot write file: " + w.out);
    std::cout << "wrote " << w.out << " (" << rows.size() - failures << " of " << rows.size() << " rows succeeded)\n";
    return failures == rows.size() ? *first_failure : 0;
}

// Splices `key = value` lines from --config in front of the command-line
// flags. Options keep their last value, so flags override the file.
std::vector<std::string> expand_config(CLI::App& app, std::vector<std::string> args) {
    if (args.empty()) return args;
    CLI::App* sub = app.get_subcommand_no_throw(args.front());
    if (!sub) return args;
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw InputError("file not found: " + path);
    std::vector<std::string> injected;
    for (const CLI::ConfigItem& item : CLI::ConfigBase().from_config(in)) {
        std::string key = item.fullname();
        for (char& ch : key)
            if (ch == '_') ch = '-';
        if (key == "config" || !sub->get_option_no_throw("--" + key))
            throw InputError(path + ": unknown key '" + item.fullname() + "' for command " + sub->get_name());
        std::string value;
        for (const std::string& v : item.inputs) value += (value.empty() ? "" : " ") + v;
        injected.push_back("--" + key + "=" + value);
    }
    args.insert(args.begin() + 1, injected.begin(), injected.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compress embeddings with PCA, Isomap or their concatenation and score them with a small MLP"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Common common;
    SpecArgs spec_args;
    DataArgs data_args;
    TrainArgs train_args;

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "Write a synthetic dataset");
    gen->add_option("--kind", gen_args.kind, "swiss-roll, moons or line")
        ->check(CLI::IsMember({"swiss-roll", "moons", "line"}))
        ->capture_default_str();
    gen->add_option("--n", gen_args.n, "Number of rows")->capture_default_str();
    gen->add_option("--dim", gen_args.dim, "Ambient dimension (moons, line)")->capture_default_str();
    gen->add_option("--noise", gen_args.noise, "Gaussian noise per coordinate")->capture_default_str();
    gen->add_option("--warp", gen_args.warp, "Cosine warp amplitude (moons)")->capture_default_str();
    gen->add_option("--out", gen_args.out, "Output dataset (.csv, .bin or .geoc)");
    gen->add_option("--latent-out", gen_args.latent_out, "Optional CSV of ground-truth manifold coordinates");
    add_common(gen, common);

    ReduceArgs reduce_args;
    CLI::App* reduce = app.add_subcommand("reduce", "Fit a reducer on a training set and save it");
    add_spec(reduce, spec_args, true);
    reduce->add_option("--train", data_args.train, "Training dataset");
    reduce->add_option("--out", reduce_args.out, "Reducer file to write");
    reduce->add_option("--train-out", reduce_args.train_out, "Also write the reduced training set");
    reduce->add_option("--apply", reduce_args.apply, "Dataset to project with the fitted reducer");
    reduce->add_option("--apply-out", reduce_args.apply_out, "Where to write the projected --apply dataset");
    reduce->add_option("--dump-graph", reduce_args.dump_graph, "CSV edge list of the neighbor graph");
    reduce->add_option("--dump-geodesic", reduce_args.dump_geodesic, "Geodesic matrix in the binary dataset format");
    add_common(reduce, common);

    std::string reducer_path, report_out;
    CLI::App* eval = app.add_subcommand("eval", "Train classifiers on reduced data and report accuracy and MCC");
    add_spec(eval, spec_args, true);
    eval->add_option("--reducer", reducer_path, "Saved reducer to use instead of fitting from --kind and the dimension flags");
    add_data(eval, data_args);
    add_training(eval, train_args);
    eval->add_option("--out", report_out, "Report CSV");
    add_common(eval, common);

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "Evaluate a family of reducer configurations");
    sweep->add_option("--sweep", sweep_args.kind, "pca-dims, concat-splits or concat-ratios")
        ->check(CLI::IsMember({"pca-dims", "concat-splits", "concat-ratios"}))
        ->capture_default_str();
    sweep->add_option("--total", sweep_args.total, "Total width for the concat sweeps")->capture_default_str();
    add_spec(sweep, spec_args, false);
    add_data(sweep, data_args);
    add_training(sweep, train_args);
    sweep->add_option("--out", sweep_args.out, "Sweep CSV");
    add_common(sweep, common);

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(app, std::move(args));
        std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
        app.parse(args);
        if (common.threads == 0) common.threads = default_thread_count();

        if (*gen) return run_gen(gen_args, common);
        if (*reduce) return run_reduce(spec_args, data_args, reduce_args, common);
        if (*eval) return run_eval(spec_args, data_args, train_args, reducer_path, report_out, common);
        return run_sweep(sweep_args, spec_args, data_args, train_args, common);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return 4;
    }
}
