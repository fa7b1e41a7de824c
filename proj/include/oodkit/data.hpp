#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oodkit {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TrainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A softmax output over M >= 2 classes. Invariants are enforced on
/// construction: every entry in [0,1] and the entries sum to 1 within 1e-6.
class ProbVector {
public:
    static constexpr double kSumTolerance = 1e-6;

    explicit ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {
        if (probs_.size() < 2)
            throw std::invalid_argument("ProbVector: needs at least 2 classes, got " +
                                        std::to_string(probs_.size()));
        double sum = 0.0;
        for (double p : probs_) {
            if (!(p >= 0.0 && p <= 1.0))
                throw std::invalid_argument("ProbVector: entry outside [0,1]");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kSumTolerance)
            throw std::invalid_argument("ProbVector: entries sum to " + std::to_string(sum) +
                                        ", expected 1");
    }

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& values() const { return probs_; }

    std::size_t argmax() const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < probs_.size(); ++i)
            if (probs_[i] > probs_[best]) best = i;
        return best;
    }

    double max_value() const { return probs_[argmax()]; }

    /// Shannon entropy in nats; 0*log(0) counts as 0.
    double entropy() const {
        double h = 0.0;
        for (double p : probs_)
            if (p > 0.0) h -= p * std::log(p);
        return h;
    }

private:
    std::vector<double> probs_;
};

/// Raw model-input features. All entries must be finite.
class FeatureVector {
public:
    explicit FeatureVector(std::vector<double> values) : values_(std::move(values)) {
        for (double v : values_)
            if (!std::isfinite(v))
                throw std::invalid_argument("FeatureVector: non-finite entry");
    }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
};

struct LabeledSample {
    FeatureVector features;
    int label;  // class index in [0, M)

    LabeledSample(FeatureVector f, int y) : features(std::move(f)), label(y) {
        if (y < 0) throw std::invalid_argument("LabeledSample: negative label");
    }
};

/// Train/validation/test partition of a labeled dataset. The splits are
/// index-disjoint by construction in the generator; the validation split must
/// be non-empty because detector calibration runs on it.
struct SplitDataset {
    std::vector<LabeledSample> train;
    std::vector<LabeledSample> validation;
    std::vector<LabeledSample> test;

    SplitDataset(std::vector<LabeledSample> tr, std::vector<LabeledSample> va,
                 std::vector<LabeledSample> te)
        : train(std::move(tr)), validation(std::move(va)), test(std::move(te)) {
        if (validation.empty())
            throw std::invalid_argument("SplitDataset: validation split is empty");
    }
};

/// A set of inputs drawn from somewhere other than the training distribution.
struct OodPool {
    std::vector<FeatureVector> samples;
    std::string tag;

    OodPool(std::vector<FeatureVector> s, std::string t)
        : samples(std::move(s)), tag(std::move(t)) {
        if (samples.empty()) throw std::invalid_argument("OodPool: empty pool");
    }
};

}  // namespace oodkit
