#pragma once
// Synthetic Gaussian sources with analytically known likelihoods. Each
// agent observes a private Gaussian whose mean depends on the class label;
// the closed-form log-likelihood ratio, KL divergences, and error
// probability of the weighted-LLR statistic serve as exact test oracles.

#include <cstdint>
#include <span>
#include <vector>

#include "sml/training.hpp"

namespace sml {

struct GaussianSource {
    std::vector<double> mean_plus;   // class +1 mean
    std::vector<double> mean_minus;  // class -1 mean
    std::vector<double> variances;   // diagonal covariance, strictly positive

    int dim() const { return static_cast<int>(mean_plus.size()); }
    void validate() const;
};

struct NetworkDataModel {
    std::vector<GaussianSource> sources;  // one per agent
    double class_prior = 0.5;             // P(gamma0 = +1), in (0,1)

    int agents() const { return static_cast<int>(sources.size()); }
    void validate() const;
};

// obs[k][i] is agent k's feature vector at time i.
struct Stream {
    std::vector<std::vector<FeatureVec>> obs;
    int agents() const { return static_cast<int>(obs.size()); }
    int length() const { return obs.empty() ? 0 : static_cast<int>(obs[0].size()); }
};

// S observations per agent drawn i.i.d. from L_k(.|gamma0); agent k's
// substream is seeded independently so parallel runs reproduce regardless
// of scheduling.
Stream sample_stream(const NetworkDataModel& model, int gamma0, int S, std::uint64_t seed);

// One balanced labeled set of size N for training agent k.
TrainingSet sample_training_set(const GaussianSource& source, int N, std::uint64_t seed);

// log L(h|+1) - log L(h|-1) in closed form.
double true_llr(const GaussianSource& source, std::span<const double> h);

struct WeightedKl {
    double delta_plus = 0.0;   // sum_k pi_k KL(L_k(.|+1) || L_k(.|-1))
    double delta_minus = 0.0;  // sum_k pi_k KL(L_k(.|-1) || L_k(.|+1))
    double delta_min = 0.0;
};

WeightedKl weighted_kl(const NetworkDataModel& model, std::span<const double> perron);

// Exact P(sum_{tau<=S} sum_k pi_k c_k(h_{k,tau}) <= 0 | gamma0=+1) for the
// true unclipped LLR statistics; the statistic is Gaussian with mean
// S*Delta+ and variance 2*S*sum_k pi_k^2 KL_k. Returns 0.5 in the
// zero-information limit.
double oracle_error_probability(const NetworkDataModel& model, std::span<const double> perron,
                                int S);

// Agent whose statistic is the hard-clipped true LLR. Without a training
// set the training mean is zero (pure oracle statistics); with one it is
// the empirical mean of the clipped LLR over that set.
TrainedAgent make_oracle_agent(const GaussianSource& source, double beta);
TrainedAgent make_oracle_agent(const GaussianSource& source, double beta, const TrainingSet& data);

}  // namespace sml
