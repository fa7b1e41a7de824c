#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "oodkit/data.hpp"
#include "oodkit/random.hpp"

namespace oodkit {

/// Parameters of the synthetic in-distribution generator: M isotropic
/// Gaussian clusters with spread sigma, centered on the unit sphere.
struct SyntheticSpec {
    int n_classes = 3;
    int feature_dim = 2;
    int samples_per_class = 300;
    double cluster_spread = 0.05;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_classes < 2) throw ConfigError("synthetic: n_classes must be >= 2");
        if (feature_dim < 2) throw ConfigError("synthetic: feature_dim must be >= 2");
        if (!(cluster_spread > 0.0)) throw ConfigError("synthetic: cluster_spread must be > 0");
        if (samples_per_class < 5)
            throw ConfigError("synthetic: samples_per_class must be >= 5 for a 60/20/20 split");
    }
};

namespace detail {

inline std::vector<double> random_unit_vector(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(dim);
    double norm = 0.0;
    do {
        norm = 0.0;
        for (double& x : v) {
            x = gauss(rng);
            norm += x * x;
        }
    } while (norm < 1e-12);
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
}

}  // namespace detail

/// Class centers: a regular M-gon of radius 1 inside a seed-dependent random
/// 2-plane, rotated by a seed-dependent phase. All centers have unit norm and
/// pairwise distance 2*sin(pi/M), so classes stay separated for every seed.
inline std::vector<std::vector<double>> class_centers(const SyntheticSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(mix_seed(spec.seed, 0));
    std::vector<double> u = detail::random_unit_vector(spec.feature_dim, rng);
    // Orthonormalize a second direction against u.
    std::vector<double> v(spec.feature_dim);
    double vnorm = 0.0;
    do {
        v = detail::random_unit_vector(spec.feature_dim, rng);
        double dot = 0.0;
        for (int i = 0; i < spec.feature_dim; ++i) dot += u[i] * v[i];
        vnorm = 0.0;
        for (int i = 0; i < spec.feature_dim; ++i) {
            v[i] -= dot * u[i];
            vnorm += v[i] * v[i];
        }
    } while (vnorm < 1e-12);
    vnorm = std::sqrt(vnorm);
    for (double& x : v) x /= vnorm;

    std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
    double phase = phase_dist(rng);

    std::vector<std::vector<double>> centers(spec.n_classes);
    for (int k = 0; k < spec.n_classes; ++k) {
        double angle = phase + 2.0 * std::numbers::pi * k / spec.n_classes;
        double c = std::cos(angle), s = std::sin(angle);
        centers[k].resize(spec.feature_dim);
        for (int i = 0; i < spec.feature_dim; ++i) centers[k][i] = c * u[i] + s * v[i];
    }
    return centers;
}

/// Draws samples_per_class points per class and splits them 60/20/20 into
/// train/validation/test (per class, so every split is stratified). The whole
/// procedure is a pure function of the spec.
inline SplitDataset generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    auto centers = class_centers(spec);

    std::mt19937_64 rng(mix_seed(spec.seed, 1));
    std::normal_distribution<double> gauss(0.0, 1.0);

    int n = spec.samples_per_class;
    int n_train = static_cast<int>(0.6 * n);
    int n_val = static_cast<int>(0.2 * n);

    std::vector<LabeledSample> train, validation, test;
    for (int k = 0; k < spec.n_classes; ++k) {
        for (int j = 0; j < n; ++j) {
            std::vector<double> x(spec.feature_dim);
            for (int i = 0; i < spec.feature_dim; ++i)
                x[i] = centers[k][i] + spec.cluster_spread * gauss(rng);
            LabeledSample sample(FeatureVector(std::move(x)), k);
            if (j < n_train)
                train.push_back(std::move(sample));
            else if (j < n_train + n_val)
                validation.push_back(std::move(sample));
            else
                test.push_back(std::move(sample));
        }
    }

    // Mix class order inside each split so mini-batches see all classes.
    std::mt19937_64 shuffle_rng(mix_seed(spec.seed, 2));
    auto shuffled = [&](std::vector<LabeledSample>& split) {
        std::vector<std::size_t> order(split.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        shuffle_in_place(order, shuffle_rng);
        std::vector<LabeledSample> out;
        out.reserve(split.size());
        for (std::size_t i : order) out.push_back(std::move(split[i]));
        return out;
    };
    train = shuffled(train);
    validation = shuffled(validation);
    test = shuffled(test);

    return SplitDataset(std::move(train), std::move(validation), std::move(test));
}

enum class PoolMode { kUniformBox, kShiftedCluster };

inline std::string to_string(PoolMode mode) {
    return mode == PoolMode::kUniformBox ? "uniform-box" : "shifted-cluster";
}

inline PoolMode pool_mode_from_string(const std::string& s) {
    if (s == "uniform-box") return PoolMode::kUniformBox;
    if (s == "shifted-cluster") return PoolMode::kShiftedCluster;
    throw ConfigError("unknown pool mode '" + s + "'");
}

struct PoolSpec {
    PoolMode mode = PoolMode::kUniformBox;
    int n = 400;
    std::uint64_t seed = 0;
    std::string tag = "pool";
};

/// OOD sample generator. uniform-box draws coordinates from [-2,2]^d;
/// shifted-cluster places a Gaussian (same spread as the companion data)
/// whose center sits exactly 3 units from the nearest class center, hence
/// >= 3 units from every class center.
inline OodPool generate_ood_pool(const SyntheticSpec& companion, const PoolSpec& pool) {
    companion.validate();
    if (pool.n < 1) throw ConfigError("ood pool: n must be >= 1");

    std::mt19937_64 rng(mix_seed(pool.seed, 3));
    int d = companion.feature_dim;
    std::vector<FeatureVector> samples;
    samples.reserve(pool.n);

    if (pool.mode == PoolMode::kUniformBox) {
        std::uniform_real_distribution<double> box(-2.0, 2.0);
        for (int j = 0; j < pool.n; ++j) {
            std::vector<double> x(d);
            for (double& xi : x) xi = box(rng);
            samples.emplace_back(std::move(x));
        }
    } else {
        auto centers = class_centers(companion);
        std::vector<double> dir = detail::random_unit_vector(d, rng);
        // t*dir is at distance 3 from the center with the largest <dir, c_k>:
        // |t*dir - c|^2 = t^2 - 2*t*<dir,c> + 1 = 9.
        double m = -1.0;
        for (const auto& c : centers) {
            double dot = 0.0;
            for (int i = 0; i < d; ++i) dot += dir[i] * c[i];
            m = std::max(m, dot);
        }
        double t = m + std::sqrt(m * m + 8.0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int j = 0; j < pool.n; ++j) {
            std::vector<double> x(d);
            for (int i = 0; i < d; ++i)
                x[i] = t * dir[i] + companion.cluster_spread * gauss(rng);
            samples.emplace_back(std::move(x));
        }
    }
    return OodPool(std::move(samples), pool.tag);
}

}  // namespace oodkit
