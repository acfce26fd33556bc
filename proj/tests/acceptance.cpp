// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.
// Usage: geoc_acceptance [path-to-geoc-cli]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "geoc/geodesic.hpp"
#include "geoc/isomap.hpp"
#include "geoc/metrics.hpp"
#include "geoc/model.hpp"
#include "geoc/pca.hpp"
#include "geoc/pipeline.hpp"
#include "geoc/synth.hpp"
#include "oracles.hpp"

using namespace geoc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(const std::string& name, double budget_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_seconds > 0 && elapsed > budget_seconds) {
        out.pass = false;
        out.detail += " [over time budget " + std::to_string(budget_seconds) + " s]";
    }
    std::printf("%s %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str(), elapsed);
    std::fflush(stdout);
    if (!out.pass) ++failures;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Outcome geodesic_oracle() {
    double worst = 0.0;
    geoc::SplitMix64 rng(1);
    for (int g = 0; g < 100; ++g) {
        const std::size_t n = 2 + rng.below(49);
        const auto graph = oracle::random_connected_graph(n, 1000 + static_cast<std::uint64_t>(g), rng.uniform(0.0, 0.3));
        const auto geo = all_pairs_geodesic(graph);
        worst = std::max(worst, (geo.distances - oracle::floyd_warshall(graph)).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-12, "100 graphs, max |diff| " + num(worst) + " (limit 1e-12)"};
}

Outcome mds_exactness() {
    double worst = 0.0;
    geoc::SplitMix64 rng(2);
    for (int s = 0; s < 50; ++s) {
        const auto m = static_cast<Eigen::Index>(1 + rng.below(5));
        const auto n = static_cast<Eigen::Index>(m + 2 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(99 - m))));
        const auto x = oracle::random_matrix(n, m, 2000 + static_cast<std::uint64_t>(s), rng.uniform(0.5, 10.0));
        const auto d = oracle::pairwise_distances(x);
        const auto got = oracle::pairwise_distances(classical_mds(d, m).coordinates());
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) worst = std::max(worst, std::abs(got(i, j) - d(i, j)) / d(i, j));
    }
    return {worst <= 1e-6, "50 point sets, max relative error " + num(worst) + " (limit 1e-6)"};
}

const ManifoldSample& swiss_fixture() {
    static const ManifoldSample sample = gen_swiss_roll(1000, 0.05, 17);
    return sample;
}

const IsomapModel& swiss_model() {
    static const IsomapModel model = isomap_fit(swiss_fixture().dataset, 2, 10);
    return model;
}

Outcome swiss_roll() {
    const Eigen::VectorXd first = swiss_model().embedding().col(0);
    const double r = std::abs(oracle::pearson(first, swiss_fixture().latent.col(0)));
    return {r >= 0.99, "n=1000 noise 0.05 k=10 m=2, |r| = " + num(r) + " (limit 0.99)"};
}

Outcome nystrom_self_consistency() {
    const auto& model = swiss_model();
    const auto out = isomap_transform(model, swiss_fixture().dataset);
    const double worst = (out.vectors - model.embedding()).cwiseAbs().maxCoeff();
    return {worst <= 1e-6, "max |diff| " + num(worst) + " (limit 1e-6)"};
}

Outcome pca_oracle() {
    // Spread the column scales so the spectrum has clear gaps.
    RowMatrix x = oracle::random_matrix(200, 32, 3);
    for (Eigen::Index j = 0; j < 32; ++j) x.col(j) *= 1.0 + 0.25 * static_cast<double>(j);
    const Eigen::Index m = 8;
    const auto model = pca_fit(oracle::dataset(x), m);

    // Oracle: Jacobi on the explicitly formed covariance.
    const RowMatrix centered = x.rowwise() - x.colwise().mean();
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / 199.0;
    const auto ref = oracle::jacobi_eigen(cov);
    const double angle = oracle::max_principal_angle(ref.vectors.leftCols(m), model.components);
    double var_err = 0.0;
    for (Eigen::Index c = 0; c < m; ++c)
        var_err = std::max(var_err, std::abs(model.explained_variance(c) - ref.values(c)) / ref.values(c));
    return {angle <= 1e-6 && var_err <= 1e-8,
            "200x32, m=8: max principal angle " + num(angle) + " (limit 1e-6), variance rel error " + num(var_err) +
                " (limit 1e-8)"};
}

Outcome gradient_checks() {
    double worst = 0.0;
    geoc::SplitMix64 rng(4);
    for (int i = 0; i < 20; ++i) {
        const auto d = static_cast<Eigen::Index>(1 + rng.below(12));
        const auto rows = static_cast<Eigen::Index>(1 + rng.below(8));
        const MlpClassifier model(d, 4000 + static_cast<std::uint64_t>(i));
        const auto x = oracle::kink_free_batch(model, rows, 5000 + static_cast<std::uint64_t>(i));
        Eigen::VectorXd y(rows);
        for (Eigen::Index r = 0; r < rows; ++r) y(r) = static_cast<double>(rng.below(2));
        worst = std::max(worst, gradient_check(model, x, y));
    }
    return {worst <= 1e-4, "20 instances, max relative error " + num(worst) + " (limit 1e-4)"};
}

Outcome metric_correctness() {
    geoc::SplitMix64 rng(5);
    double worst = 0.0;
    int checked = 0;
    while (checked < 1000) {
        const std::size_t n = 2 + rng.below(300);
        std::vector<std::uint8_t> p(n), l(n);
        Eigen::VectorXd pv(static_cast<Eigen::Index>(n)), lv(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = static_cast<std::uint8_t>(rng.below(2));
            l[i] = static_cast<std::uint8_t>(rng.below(2));
            pv(static_cast<Eigen::Index>(i)) = p[i];
            lv(static_cast<Eigen::Index>(i)) = l[i];
        }
        if (pv.minCoeff() == pv.maxCoeff() || lv.minCoeff() == lv.maxCoeff()) continue;
        worst = std::max(worst, std::abs(matthews_corr(p, l) - oracle::pearson(pv, lv)));
        ++checked;
    }
    using L = std::vector<std::uint8_t>;
    const bool degenerate = matthews_corr(L{1, 1, 1, 1}, L{1, 0, 1, 0}) == 0.0 &&
                            matthews_corr(L{0, 1, 0, 1}, L{0, 0, 0, 0}) == 0.0 &&
                            matthews_corr(L{0, 0, 0}, L{0, 0, 0}) == 0.0;
    return {worst <= 1e-12 && degenerate, "1000 instances, max |MCC - Pearson| " + num(worst) +
                                              " (limit 1e-12); degenerate cases " + (degenerate ? "0" : "nonzero")};
}

DatasetSplit moons_split() {
    return split_dataset(gen_lifted_moons(600, 768, 17).dataset, 0.8);
}

Outcome end_to_end() {
    const auto split = moons_split();
    const TrainConfig cfg;
    const auto concat = evaluate(ReducerSpec::concat(16, 48, 30), split, cfg);
    const auto pca = evaluate(ReducerSpec::pca(64), split, cfg);
    const bool pass = concat.mean_accuracy >= 0.90 && concat.mean_accuracy >= pca.mean_accuracy - 0.02;
    return {pass, "moons n=600 d=768, concat 16/48 k=30 accuracy " + num(concat.mean_accuracy) + " (MCC " +
                      num(concat.mean_matthews) + "), PCA-64 accuracy " + num(pca.mean_accuracy) +
                      "; need >= 0.90 and >= PCA-64 - 0.02"};
}

Outcome determinism(const std::string& cli) {
    const fs::path dir = fs::temp_directory_path() / "geoc_acceptance";
    fs::create_directories(dir);
    const auto split = moons_split();
    TrainConfig cfg;
    cfg.epochs = 10;
    EvalOptions opts;
    opts.threads = 2;
    for (int pass = 0; pass < 2; ++pass) {
        const auto reducer = fit(ReducerSpec::concat(16, 48, 30), split.train, {2});
        save_reducer(reducer, dir / ("lib" + std::to_string(pass) + ".geor"));
        write_report_csv(evaluate(reducer, split, cfg, opts), dir / ("lib" + std::to_string(pass) + ".csv"));
    }
    bool same = slurp(dir / "lib0.geor") == slurp(dir / "lib1.geor") && slurp(dir / "lib0.csv") == slurp(dir / "lib1.csv");
    std::string detail = std::string("library run ") + (same ? "identical" : "differs");

    if (!cli.empty()) {
        const std::string data = (dir / "moons.bin").string();
        bool cli_ok = std::system((cli + " gen --kind moons --n 600 --dim 768 --out " + data + " > /dev/null").c_str()) == 0;
        for (int pass = 0; pass < 2 && cli_ok; ++pass) {
            const std::string p = (dir / ("cli" + std::to_string(pass))).string();
            cli_ok = std::system((cli + " reduce --kind concat --isomap-dim 16 --pca-dim 48 --k 30 --threads 2 --train " +
                                  data + " --out " + p + ".geor > /dev/null").c_str()) == 0 &&
                     std::system((cli + " eval --reducer " + p + ".geor --train " + data +
                                  " --epochs 10 --threads 2 --out " + p + ".csv > /dev/null").c_str()) == 0;
        }
        const bool cli_same = cli_ok && slurp(dir / "cli0.geor") == slurp(dir / "cli1.geor") &&
                              slurp(dir / "cli0.csv") == slurp(dir / "cli1.csv");
        detail += std::string(", CLI run ") + (cli_ok ? (cli_same ? "identical" : "differs") : "failed");
        same = same && cli_same;
    }
    return {same, detail + " (reducer files and CSV reports)"};
}

Outcome sweep_contract(const std::string& cli) {
    const std::vector<Split> expected{{0, 64}, {16, 48}, {32, 32}, {48, 16}, {64, 0}};
    bool pass = table_splits(64) == expected;
    std::string detail = std::string("table_splits(64) ") + (pass ? "matches" : "differs");
    if (!cli.empty()) {
        const fs::path dir = fs::temp_directory_path() / "geoc_acceptance";
        fs::create_directories(dir);
        const std::string data = (dir / "sweep.bin").string(), out = (dir / "sweep.csv").string();
        const bool ran =
            std::system((cli + " gen --kind moons --n 200 --dim 96 --out " + data + " > /dev/null").c_str()) == 0 &&
            std::system((cli + " sweep --sweep concat-splits --total 64 --k 10 --epochs 2 --runs 1 --train " + data +
                         " --out " + out + " > /dev/null").c_str()) == 0;
        std::istringstream csv(ran ? slurp(out) : "");
        std::vector<std::string> lines;
        for (std::string line; std::getline(csv, line);) lines.push_back(line);
        std::vector<std::string> labels;
        for (std::size_t i = 1; i < lines.size(); ++i) labels.push_back(lines[i].substr(0, lines[i].find(',')));
        const bool cli_ok = ran && labels == std::vector<std::string>{"0/64", "16/48", "32/32", "48/16", "64/0"};
        detail += std::string(", CLI sweep rows ") + (cli_ok ? "0/64 16/48 32/32 48/16 64/0" : "wrong");
        pass = pass && cli_ok;
    }
    return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    criterion("geodesic oracle equivalence", 10, geodesic_oracle);
    criterion("classical MDS exactness", 30, mds_exactness);
    criterion("swiss roll unrolling", 60, swiss_roll);
    criterion("out-of-sample self-consistency", 0, nystrom_self_consistency);
    criterion("PCA oracle", 0, pca_oracle);
    criterion("gradient check", 0, gradient_checks);
    criterion("metric correctness", 0, metric_correctness);
    criterion("end-to-end moons", 180, end_to_end);
    criterion("determinism", 0, [&] { return determinism(cli); });
    criterion("sweep contract", 0, [&] { return sweep_contract(cli); });
    std::printf("summary: %d of 10 criteria passed\n", 10 - failures);
    return failures ? 1 : 0;
}
