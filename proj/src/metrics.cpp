#include "geoc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "geoc/error.hpp"
#include "geoc/parallel.hpp"

namespace geoc {

namespace {

void check_pair(std::span<const std::uint8_t> predictions, std::span<const std::uint8_t> labels) {
    if (predictions.size() != labels.size())
        throw InputError("prediction count " + std::to_string(predictions.size()) + " differs from label count " +
                         std::to_string(labels.size()));
    if (labels.empty()) throw InputError("metrics need at least one prediction");
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (predictions[i] > 1 || labels[i] > 1) throw InputError("non-binary value at index " + std::to_string(i));
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

double matthews_corr(std::span<const std::uint8_t> predictions, std::span<const std::uint8_t> labels) {
    check_pair(predictions, labels);
    double tp = 0, tn = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (predictions[i]) {
            (labels[i] ? tp : fp) += 1;
        } else {
            (labels[i] ? fn : tn) += 1;
        }
    }
    const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (denom == 0.0) return 0.0;
    return (tp * tn - fp * fn) / std::sqrt(denom);
}

double accuracy(std::span<const std::uint8_t> predictions, std::span<const std::uint8_t> labels) {
    check_pair(predictions, labels);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) hits += predictions[i] == labels[i];
    return static_cast<double>(hits) / static_cast<double>(labels.size());
}

EvalReport evaluate(const FittedReducer& reducer, const DatasetSplit& split, const TrainConfig& cfg,
                    const EvalOptions& options) {
    split.validate(true);
    if (options.n_runs < 1) throw InputError("at least one run is required");

    const EmbeddingDataset train_reduced = transform(reducer, split.train, options.threads);
    const EmbeddingDataset eval_reduced = transform(reducer, split.eval, options.threads);

    EvalReport report;
    report.spec = reducer.spec;
    report.runs.resize(options.n_runs);
    parallel_for(options.n_runs, options.threads, [&](std::size_t run) {
        TrainConfig run_cfg = cfg;
        run_cfg.seed = options.same_seed ? cfg.seed : cfg.seed + run;
        const MlpClassifier model = train(train_reduced, run_cfg);
        const auto predicted = predict_labels(model, eval_reduced);
        report.runs[run] = {run_cfg.seed, accuracy(predicted, *eval_reduced.labels),
                            matthews_corr(predicted, *eval_reduced.labels)};
    });
    std::stable_sort(report.runs.begin(), report.runs.end(),
                     [](const RunResult& a, const RunResult& b) { return a.seed < b.seed; });

    for (const RunResult& r : report.runs) {
        report.mean_accuracy += r.accuracy;
        report.mean_matthews += r.matthews;
    }
    report.mean_accuracy /= static_cast<double>(report.runs.size());
    report.mean_matthews /= static_cast<double>(report.runs.size());

    std::ostringstream fp;
    const ReducerSpec& s = reducer.spec;
    fp << s.label() << ":iso=" << s.isomap_dim << ":pca=" << s.pca_dim << ":k=" << s.k_neighbors
       << ":train=" << std::hex << reducer.train_fingerprint.hash << std::dec << ":lr=" << cfg.learning_rate
       << ":epochs=" << cfg.epochs << ":batch=" << cfg.batch_size << ":seed=" << cfg.seed;
    report.fingerprint = fp.str();
    return report;
}

EvalReport evaluate(const ReducerSpec& spec, const DatasetSplit& split, const TrainConfig& cfg,
                    const EvalOptions& options) {
    split.validate(true);
    FitOptions fit_options = options.fit;
    fit_options.threads = options.threads;
    const FittedReducer reducer = fit(spec, split.train, fit_options);
    return evaluate(reducer, split, cfg, options);
}

std::string report_csv(const EvalReport& report) {
    std::ostringstream out;
    const ReducerSpec& s = report.spec;
    const std::string prefix = s.label() + "," + std::to_string(s.isomap_dim) + "," + std::to_string(s.pca_dim) + "," +
                               std::to_string(s.uses_isomap() ? s.k_neighbors : 0) + ",";
    out << "spec,isomap_dim,pca_dim,k,seed,accuracy,matthews\n";
    for (const RunResult& r : report.runs)
        out << prefix << r.seed << ',' << format_number(r.accuracy) << ',' << format_number(r.matthews) << '\n';
    out << prefix << "mean," << format_number(report.mean_accuracy) << ',' << format_number(report.mean_matthews)
        << '\n';
    return out.str();
}

void write_report_csv(const EvalReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + path.string());
    out << report_csv(report);
    if (!out) throw InputError("cannot write file: " + path.string());
}

}  // namespace geoc
