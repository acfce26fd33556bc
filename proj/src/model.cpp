#include "geoc/model.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "geoc/error.hpp"
#include "geoc/random.hpp"

namespace geoc {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) - y z, the cross-entropy of a logit against a 0/1 target.
double logit_cross_entropy(double z, double y) {
    return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

struct Forward {
    Eigen::MatrixXd pre;     // n x 64
    Eigen::MatrixXd hidden;  // n x 64
    Eigen::VectorXd logit;   // n
};

Forward forward(const MlpParameters& p, const RowMatrix& x) {
    Forward f;
    f.pre = x * p.w1;
    f.pre.rowwise() += p.b1.transpose();
    f.hidden = f.pre.cwiseMax(0.0);
    f.logit = (f.hidden * p.w2).array() + p.b2;
    return f;
}

void check_input(const MlpParameters& p, const RowMatrix& x) {
    if (x.cols() != p.w1.rows())
        throw InputError("classifier expects dimension " + std::to_string(p.w1.rows()) + ", got " +
                         std::to_string(x.cols()));
}

template <typename F>
void for_each_block(MlpParameters& a, const MlpParameters& b, F&& f) {
    f(a.w1.array(), b.w1.array());
    f(a.b1.array(), b.b1.array());
    f(a.w2.array(), b.w2.array());
    Eigen::Map<Eigen::ArrayXd> a2(&a.b2, 1);
    Eigen::Map<const Eigen::ArrayXd> b2(&b.b2, 1);
    f(a2, b2);
}

}  // namespace

void TrainConfig::validate(std::size_t n) const {
    if (!(learning_rate > 0.0)) throw InputError("learning rate must be positive");
    if (epochs < 1) throw InputError("epochs must be positive");
    if (batch_size < 1) throw InputError("batch size must be positive");
    if (batch_size > n)
        throw InputError("batch size " + std::to_string(batch_size) + " exceeds training size " + std::to_string(n));
}

MlpParameters MlpParameters::zeros(Eigen::Index input_dim) {
    MlpParameters p;
    p.w1 = Eigen::MatrixXd::Zero(input_dim, kHiddenWidth);
    p.b1 = Eigen::VectorXd::Zero(kHiddenWidth);
    p.w2 = Eigen::VectorXd::Zero(kHiddenWidth);
    p.b2 = 0.0;
    return p;
}

double& MlpParameters::at(Eigen::Index flat) {
    if (flat < w1.size()) return w1.data()[flat];
    flat -= w1.size();
    if (flat < b1.size()) return b1(flat);
    flat -= b1.size();
    if (flat < w2.size()) return w2(flat);
    flat -= w2.size();
    if (flat == 0) return b2;
    throw InputError("parameter index out of range");
}

double MlpParameters::at(Eigen::Index flat) const { return const_cast<MlpParameters&>(*this).at(flat); }

bool MlpParameters::all_finite() const { return w1.allFinite() && b1.allFinite() && w2.allFinite() && std::isfinite(b2); }

MlpClassifier::MlpClassifier(Eigen::Index input_dim, std::uint64_t seed) : seed_(seed) {
    if (input_dim < 1) throw InputError("classifier input dimension must be positive");
    params_ = MlpParameters::zeros(input_dim);
    SplitMix64 rng(seed);
    const double limit1 = std::sqrt(6.0 / static_cast<double>(input_dim + kHiddenWidth));
    for (Eigen::Index j = 0; j < params_.w1.cols(); ++j)
        for (Eigen::Index i = 0; i < params_.w1.rows(); ++i) params_.w1(i, j) = rng.uniform(-limit1, limit1);
    const double limit2 = std::sqrt(6.0 / static_cast<double>(kHiddenWidth + 1));
    for (Eigen::Index i = 0; i < kHiddenWidth; ++i) params_.w2(i) = rng.uniform(-limit2, limit2);
}

Eigen::VectorXd MlpClassifier::predict(const RowMatrix& x) const {
    check_input(params_, x);
    const Forward f = forward(params_, x);
    constexpr double lo = std::numeric_limits<double>::min();
    const double hi = std::nextafter(1.0, 0.0);
    return f.logit.unaryExpr([&](double z) { return std::clamp(sigmoid(z), lo, hi); });
}

double MlpClassifier::loss(const RowMatrix& x, const Eigen::VectorXd& y) const {
    check_input(params_, x);
    const Forward f = forward(params_, x);
    double total = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) total += logit_cross_entropy(f.logit(i), y(i));
    return total / static_cast<double>(y.size());
}

double MlpClassifier::loss_and_gradient(const RowMatrix& x, const Eigen::VectorXd& y, MlpParameters& grad) const {
    check_input(params_, x);
    if (x.rows() != y.size() || y.size() == 0) throw InputError("batch rows and targets disagree");
    const Forward f = forward(params_, x);
    const double inv_n = 1.0 / static_cast<double>(y.size());

    double total = 0.0;
    Eigen::VectorXd d_logit(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        total += logit_cross_entropy(f.logit(i), y(i));
        d_logit(i) = (sigmoid(f.logit(i)) - y(i)) * inv_n;
    }

    grad.w2 = f.hidden.transpose() * d_logit;
    grad.b2 = d_logit.sum();
    Eigen::MatrixXd d_pre = d_logit * params_.w2.transpose();
    d_pre.array() *= (f.pre.array() > 0.0).cast<double>();
    grad.w1 = x.transpose() * d_pre;
    grad.b1 = d_pre.colwise().sum().transpose();
    return total * inv_n;
}

AdamOptimizer::AdamOptimizer(const TrainConfig& cfg, Eigen::Index input_dim)
    : lr_(cfg.learning_rate),
      beta1_(cfg.adam_beta1),
      beta2_(cfg.adam_beta2),
      eps_(cfg.adam_eps),
      m_(MlpParameters::zeros(input_dim)),
      v_(MlpParameters::zeros(input_dim)) {}

void AdamOptimizer::step(MlpParameters& params, const MlpParameters& grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for_each_block(m_, grad, [&](auto m, auto g) { m = beta1_ * m + (1.0 - beta1_) * g; });
    for_each_block(v_, grad, [&](auto v, auto g) { v = beta2_ * v + (1.0 - beta2_) * g.square(); });

    MlpParameters update = m_;
    for_each_block(update, v_, [&](auto u, auto v) { u = lr_ * (u / c1) / ((v / c2).sqrt() + eps_); });
    for_each_block(params, update, [](auto p, auto u) { p -= u; });
}

MlpClassifier train(const EmbeddingDataset& train_ds, const TrainConfig& cfg, std::vector<double>* epoch_loss) {
    train_ds.validate();
    if (!train_ds.labels) throw InputError("labels required for training");
    const std::size_t n = train_ds.size();
    cfg.validate(n);

    const auto d = static_cast<Eigen::Index>(train_ds.dim());
    MlpClassifier model(d, cfg.seed);
    AdamOptimizer adam(cfg, d);
    SplitMix64 shuffle_rng(cfg.seed ^ 0x5851f42d4c957f2dULL);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    MlpParameters grad = MlpParameters::zeros(d);
    if (epoch_loss) epoch_loss->clear();

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[shuffle_rng.below(i + 1)]);
        double sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t count = std::min(cfg.batch_size, n - start);
            RowMatrix x(static_cast<Eigen::Index>(count), d);
            Eigen::VectorXd y(static_cast<Eigen::Index>(count));
            for (std::size_t r = 0; r < count; ++r) {
                const std::size_t src = order[start + r];
                x.row(static_cast<Eigen::Index>(r)) = train_ds.vectors.row(static_cast<Eigen::Index>(src));
                y(static_cast<Eigen::Index>(r)) = (*train_ds.labels)[src];
            }
            const double batch_loss = model.loss_and_gradient(x, y, grad);
            if (!std::isfinite(batch_loss))
                throw NumericalError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                                     std::to_string(batches));
            adam.step(model.parameters(), grad);
            if (!model.parameters().all_finite())
                throw NumericalError("parameters diverged at epoch " + std::to_string(epoch) + ", batch " +
                                     std::to_string(batches));
            sum += batch_loss;
            ++batches;
        }
        if (epoch_loss) epoch_loss->push_back(sum / static_cast<double>(batches));
    }
    return model;
}

std::vector<double> predict(const MlpClassifier& model, const EmbeddingDataset& ds) {
    const Eigen::VectorXd p = model.predict(ds.vectors);
    return {p.data(), p.data() + p.size()};
}

std::vector<std::uint8_t> predict_labels(const MlpClassifier& model, const EmbeddingDataset& ds) {
    const Eigen::VectorXd p = model.predict(ds.vectors);
    std::vector<std::uint8_t> out(static_cast<std::size_t>(p.size()));
    for (Eigen::Index i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(i)] = p(i) >= 0.5 ? 1 : 0;
    return out;
}

double gradient_check(const MlpClassifier& model, const RowMatrix& x, const Eigen::VectorXd& y) {
    constexpr double h = 1e-5;
    MlpParameters analytic = MlpParameters::zeros(model.input_dim());
    model.loss_and_gradient(x, y, analytic);

    MlpClassifier probe = model;
    double worst = 0.0;
    for (Eigen::Index p = 0; p < analytic.size(); ++p) {
        double& theta = probe.parameters().at(p);
        const double saved = theta;
        theta = saved + h;
        const double up = probe.loss(x, y);
        theta = saved - h;
        const double down = probe.loss(x, y);
        theta = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double a = analytic.at(p);
        const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
        worst = std::max(worst, std::abs(a - numeric) / denom);
    }
    return worst;
}

}  // namespace geoc
