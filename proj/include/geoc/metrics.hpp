#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "geoc/dataio.hpp"
#include "geoc/model.hpp"
#include "geoc/pipeline.hpp"

namespace geoc {

/// Matthews correlation; 0 when any marginal count is zero.
double matthews_corr(std::span<const std::uint8_t> predictions, std::span<const std::uint8_t> labels);
double accuracy(std::span<const std::uint8_t> predictions, std::span<const std::uint8_t> labels);

struct RunResult {
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    double matthews = 0.0;
};

struct EvalReport {
    ReducerSpec spec;
    std::vector<RunResult> runs;  // sorted by seed
    double mean_accuracy = 0.0;
    double mean_matthews = 0.0;
    std::string fingerprint;  // reducer spec, training data and training config
};

struct EvalOptions {
    std::size_t n_runs = 3;
    unsigned threads = 0;
    // Force every run to use cfg.seed instead of cfg.seed + run.
    bool same_seed = false;
    FitOptions fit;
};

/// Trains n_runs classifiers on the reduced training split and scores each on
/// the reduced evaluation split.
EvalReport evaluate(const FittedReducer& reducer, const DatasetSplit& split, const TrainConfig& cfg,
                    const EvalOptions& options = {});

/// Fits the reducer once on split.train, then evaluates as above.
EvalReport evaluate(const ReducerSpec& spec, const DatasetSplit& split, const TrainConfig& cfg,
                    const EvalOptions& options = {});

/// Columns spec,isomap_dim,pca_dim,k,seed,accuracy,matthews; one row per run
/// followed by a summary row whose seed field is "mean".
void write_report_csv(const EvalReport& report, const std::filesystem::path& path);
std::string report_csv(const EvalReport& report);

}  // namespace geoc
