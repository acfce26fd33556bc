#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "geoc/dataio.hpp"

namespace geoc {

constexpr Eigen::Index kHiddenWidth = 64;

struct TrainConfig {
    double learning_rate = 1e-4;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    int epochs = 50;
    std::size_t batch_size = 32;
    std::uint64_t seed = 17;

    void validate(std::size_t n) const;
};

// Gradient (or Adam moment) buffers shaped like the classifier parameters.
struct MlpParameters {
    Eigen::MatrixXd w1;  // input_dim x 64
    Eigen::VectorXd b1;
    Eigen::VectorXd w2;  // 64
    double b2 = 0.0;

    static MlpParameters zeros(Eigen::Index input_dim);
    Eigen::Index size() const { return w1.size() + b1.size() + w2.size() + 1; }
    /// Flat view order: w1 (column-major), b1, w2, b2.
    double& at(Eigen::Index flat);
    double at(Eigen::Index flat) const;
    bool all_finite() const;
};

// One hidden ReLU layer of width 64 feeding a sigmoid output unit:
// p(x) = sigmoid(w2 . relu(W1^T x + b1) + b2).
class MlpClassifier {
public:
    MlpClassifier() = default;
    /// Glorot-uniform weights, zero biases, seeded.
    MlpClassifier(Eigen::Index input_dim, std::uint64_t seed);

    Eigen::Index input_dim() const { return params_.w1.rows(); }
    std::uint64_t seed() const { return seed_; }
    MlpParameters& parameters() { return params_; }
    const MlpParameters& parameters() const { return params_; }

    /// Probabilities for every row.
    Eigen::VectorXd predict(const RowMatrix& x) const;
    /// Mean binary cross-entropy over the batch.
    double loss(const RowMatrix& x, const Eigen::VectorXd& y) const;
    /// Mean binary cross-entropy and its gradient with respect to every parameter.
    double loss_and_gradient(const RowMatrix& x, const Eigen::VectorXd& y, MlpParameters& grad) const;

private:
    MlpParameters params_;
    std::uint64_t seed_ = 0;
};

// Adam with bias-corrected first and second moments.
class AdamOptimizer {
public:
    AdamOptimizer(const TrainConfig& cfg, Eigen::Index input_dim);
    void step(MlpParameters& params, const MlpParameters& grad);
    long steps() const { return t_; }

private:
    double lr_, beta1_, beta2_, eps_;
    MlpParameters m_, v_;
    long t_ = 0;
};

/// Trains with shuffled mini-batches (last batch may be short). If
/// `epoch_loss` is given it receives the mean batch loss of every epoch.
MlpClassifier train(const EmbeddingDataset& train_ds, const TrainConfig& cfg, std::vector<double>* epoch_loss = nullptr);

std::vector<double> predict(const MlpClassifier& model, const EmbeddingDataset& ds);
/// Probabilities thresholded at 0.5.
std::vector<std::uint8_t> predict_labels(const MlpClassifier& model, const EmbeddingDataset& ds);

/// Max relative error between analytic gradients and central finite
/// differences (step 1e-5) over all parameters. Relative error is
/// |a - f| / max(|a|, |f|, 1e-8).
double gradient_check(const MlpClassifier& model, const RowMatrix& x, const Eigen::VectorXd& y);

}  // namespace geoc
