#include "geoc/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "geoc/error.hpp"
#include "geoc/random.hpp"

namespace geoc {

namespace {

constexpr double kPi = std::numbers::pi;

// Arc length of the planar spiral r = t from 0 to t.
double spiral_arc_length(double t) { return 0.5 * (t * std::sqrt(1.0 + t * t) + std::asinh(t)); }

}  // namespace

ManifoldSample gen_swiss_roll(std::size_t n, double noise, std::uint64_t seed) {
    if (n < 10) throw InputError("swiss roll needs n >= 10");
    if (!(noise >= 0.0)) throw InputError("noise must be non-negative");
    SplitMix64 rng(seed);
    const double t0 = 1.5 * kPi;
    const double s0 = spiral_arc_length(t0);

    ManifoldSample out;
    out.dataset.vectors.resize(static_cast<Eigen::Index>(n), 3);
    out.latent.resize(static_cast<Eigen::Index>(n), 2);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
        const double t = t0 * (1.0 + 2.0 * rng.uniform());
        const double h = 21.0 * rng.uniform();
        out.dataset.vectors(i, 0) = t * std::cos(t);
        out.dataset.vectors(i, 1) = h;
        out.dataset.vectors(i, 2) = t * std::sin(t);
        if (noise > 0.0)
            for (Eigen::Index j = 0; j < 3; ++j) out.dataset.vectors(i, j) += noise * rng.gaussian();
        out.latent(i, 0) = spiral_arc_length(t) - s0;
        out.latent(i, 1) = h;
    }
    return out;
}

ManifoldSample gen_lifted_moons(std::size_t n, std::size_t ambient_dim, std::uint64_t seed, const MoonsOptions& options) {
    if (n < 2) throw InputError("moons need n >= 2");
    if (ambient_dim < 2) throw InputError("moons need ambient_dim >= 2");
    if (options.identity_lift && ambient_dim != 2) throw InputError("identity lift requires ambient_dim == 2");
    if (!(options.noise >= 0.0)) throw InputError("noise must be non-negative");
    SplitMix64 rng(seed);
    const auto dim = static_cast<Eigen::Index>(ambient_dim);

    // The lift is drawn first so it depends on the seed only, not on n.
    Eigen::MatrixXd map(dim, 2);
    Eigen::VectorXd phase(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        map(j, 0) = rng.gaussian();
        map(j, 1) = rng.gaussian();
        phase(j) = 2.0 * kPi * rng.uniform();
    }

    ManifoldSample out;
    out.dataset.vectors.resize(static_cast<Eigen::Index>(n), dim);
    out.latent.resize(static_cast<Eigen::Index>(n), 2);
    std::vector<std::uint8_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        const std::uint8_t label = i % 2;
        const double theta = kPi * rng.uniform();
        Eigen::Vector2d z = label == 0 ? Eigen::Vector2d(std::cos(theta), std::sin(theta))
                                       : Eigen::Vector2d(1.0 - std::cos(theta), 0.5 - std::sin(theta));
        labels[i] = label;
        out.latent.row(row) = z.transpose();
        if (options.identity_lift) {
            out.dataset.vectors.row(row) = z.transpose();
        } else {
            const Eigen::VectorXd u = map * z;
            for (Eigen::Index j = 0; j < dim; ++j)
                out.dataset.vectors(row, j) = u(j) + options.warp * std::cos(u(j) + phase(j));
        }
        if (options.noise > 0.0)
            for (Eigen::Index j = 0; j < dim; ++j) out.dataset.vectors(row, j) += options.noise * rng.gaussian();
    }
    out.dataset.labels = std::move(labels);
    return out;
}

ManifoldSample gen_line(std::size_t n, std::size_t ambient_dim, std::uint64_t seed) {
    if (n < 2) throw InputError("line needs n >= 2");
    if (ambient_dim < 1) throw InputError("line needs ambient_dim >= 1");
    SplitMix64 rng(seed);
    const auto dim = static_cast<Eigen::Index>(ambient_dim);
    Eigen::RowVectorXd origin(dim);
    Eigen::RowVectorXd direction(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        origin(j) = rng.gaussian();
        direction(j) = rng.gaussian();
    }
    direction.normalize();

    ManifoldSample out;
    out.dataset.vectors.resize(static_cast<Eigen::Index>(n), dim);
    out.latent.resize(static_cast<Eigen::Index>(n), 1);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
        const double t = 10.0 * rng.uniform();
        out.dataset.vectors.row(i) = origin + t * direction;
        out.latent(i, 0) = t;
    }
    return out;
}

void write_latent_csv(const ManifoldSample& sample, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + path.string());
    out << "row";
    for (Eigen::Index j = 0; j < sample.latent.cols(); ++j) out << ",z" << j;
    out << '\n';
    char buf[40];
    for (Eigen::Index i = 0; i < sample.latent.rows(); ++i) {
        out << i;
        for (Eigen::Index j = 0; j < sample.latent.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", sample.latent(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw InputError("cannot write file: " + path.string());
}

}  // namespace geoc
