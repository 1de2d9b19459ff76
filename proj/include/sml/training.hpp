#pragma once
// Per-agent empirical risk minimization over bounded function classes.
//
// Boundedness is structural: the raw linear/MLP output g(h) is wrapped as
// f(h) = beta * tanh(g(h)/beta), so |f| <= beta holds for every parameter
// vector and the model stays differentiable for gradient-based training.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sml/losses.hpp"

namespace sml {

using FeatureVec = std::vector<double>;

struct Sample {
    FeatureVec features;
    int label;  // +1 or -1
};

class TrainingSet {
public:
    // Requires labels in {+1,-1} and an equal number of each (balanced).
    explicit TrainingSet(std::vector<Sample> samples);

    const std::vector<Sample>& samples() const { return samples_; }
    int size() const { return static_cast<int>(samples_.size()); }
    int dim() const { return samples_.empty() ? 0 : static_cast<int>(samples_[0].features.size()); }

    static TrainingSet from_csv(const std::string& path);
    void to_csv(const std::string& path) const;

private:
    std::vector<Sample> samples_;
};

enum class ModelKind { linear, mlp, oracle_llr };

ModelKind model_kind_from_string(const std::string& s);
std::string to_string(ModelKind kind);

// Bounded decision model. Parameter layouts (flat vector):
//   linear: [w (dim), b]
//   mlp:    [W0 (dim*hidden), th0 (hidden), W1 (hidden*2), th1 (2)]
//           raw output z1 - z2 of a two-logit layer over tanh hidden units
//   oracle_llr: [mean_plus (dim), mean_minus (dim), variances (dim)];
//           raw output is the exact Gaussian log-likelihood ratio, and the
//           bound is enforced by hard clipping instead of tanh so that the
//           statistic is exact whenever |llr| <= beta. Not trainable.
struct BoundedModel {
    ModelKind kind = ModelKind::linear;
    double beta = 1.0;
    int dim = 0;
    int hidden = 0;
    std::vector<double> params;

    static BoundedModel make_linear(int dim, double beta);
    static BoundedModel make_mlp(int dim, int hidden, double beta, std::uint64_t seed);

    int param_count() const { return static_cast<int>(params.size()); }
    double raw(std::span<const double> h) const;
    double value(std::span<const double> h) const;  // bounded output f(h)
    // f(h) and df/dparams; grad must have param_count() entries.
    double value_and_grad(std::span<const double> h, std::span<double> grad) const;
};

struct TrainedAgent {
    BoundedModel model;
    double training_mean = 0.0;  // (1/N) sum_n f(h_n) over the training set
    std::uint64_t seed = 0;
    std::string train_config_digest;

    std::string to_json() const;
    static TrainedAgent from_json(const std::string& text);
};

struct TrainHyper {
    double beta = 1.0;  // structural output bound of the model
    int batch = 10;
    int epochs = 30;
    double rate = 1e-4;
    std::uint64_t seed = 0;
    double norm_bound = 0.0;  // > 0: project params onto the L2 ball after each step
};

// Mean of phi(label * f(features)) over the set. Throws on an empty set.
double empirical_risk(const BoundedModel& model, const TrainingSet& data, const LossSpec& loss);

// Weighted variant; weights must sum to 1 and align with the samples.
double empirical_risk_weighted(const BoundedModel& model, const TrainingSet& data,
                               const LossSpec& loss, std::span<const double> weights);

// Mini-batch SGD with a fixed rate. Deterministic given (data, hyper.seed).
// The returned parameters are the best full-data risk seen across epochs, so
// the final risk never exceeds the risk at initialization. Throws
// std::runtime_error naming the epoch if the risk turns non-finite.
TrainedAgent train_erm(const TrainingSet& data, const LossSpec& loss, ModelKind kind,
                       const TrainHyper& hyper, int hidden = 15);

// Same optimizer against the weighted empirical risk.
TrainedAgent train_erm_weighted(const TrainingSet& data, const LossSpec& loss, ModelKind kind,
                                const TrainHyper& hyper, std::span<const double> weights,
                                int hidden = 15);

// Debiased decision statistic c(h) = f(h) - training_mean; |c| <= 2*beta.
double debiased_statistic(const TrainedAgent& agent, std::span<const double> h);

}  // namespace sml
