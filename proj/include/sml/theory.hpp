#pragma once
// Bound ingredients and final bounds: decision margins, Rademacher
// complexities, the network imbalance penalty, the root d*_delta of
//   g(d) = d - (phi(d) - R_target)/(2*L_phi) = delta,
// the energy E(R,delta) = (d*_delta - delta)/4, the consistent-training
// probability bound, the streaming and single-sample error bounds, and the
// sample complexity N_eps. Natural logarithms throughout.

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "sml/datagen.hpp"
#include "sml/losses.hpp"
#include "sml/training.hpp"

namespace sml {

struct MarginReport {
    double mu_plus = 0.0;        // network average of class-+1 conditional means
    double mu_minus = 0.0;
    double mu_tilde = 0.0;       // network average of empirical training means
    double delta_plus = 0.0;     // mu_plus - mu_tilde
    double delta_minus = 0.0;    // mu_tilde - mu_minus
    double delta_achieved = 0.0; // min of the two
    double se_plus = 0.0;        // Monte Carlo standard errors of the network averages
    double se_minus = 0.0;

    std::vector<double> mu_plus_k, mu_minus_k, mu_tilde_k;
    std::vector<double> local_delta_plus;   // mu_k+ - mu_k~
    std::vector<double> local_delta_minus;  // mu_k~ - mu_k-
    std::vector<double> local_deltas;       // min of the per-agent gaps
};

// Monte Carlo estimate of the conditional means (M draws per class per
// agent, M >= 1000), combined with the stored training means.
MarginReport conditional_means(const std::vector<TrainedAgent>& agents,
                               const NetworkDataModel& model, std::span<const double> perron,
                               int M, std::uint64_t seed);

// Norm bound for linear classes: W * sqrt(X2) / sqrt(N).
double rademacher_linear_bound(double norm_bound_W, double feature_second_moment_X2, int N);

// A function class viewed through its best correlation with a sign vector.
class FunctionClassSampler {
public:
    virtual ~FunctionClassSampler() = default;
    // sup_{f in class} |(1/N) sum_n signs[n] f(data[n])|, possibly approximate
    virtual double sup_correlation(std::span<const int> signs,
                                   const std::vector<FeatureVec>& data,
                                   std::mt19937_64& rng) const = 0;
};

// Finite class given by each member's values on the fixed sample set;
// the inner sup is exact.
class FiniteClassSampler final : public FunctionClassSampler {
public:
    explicit FiniteClassSampler(std::vector<std::vector<double>> member_values);
    double sup_correlation(std::span<const int> signs, const std::vector<FeatureVec>& data,
                           std::mt19937_64& rng) const override;

private:
    std::vector<std::vector<double>> member_values_;
};

// Parametric bounded-model class; the inner sup is approximated by gradient
// ascent restarts from the provided inits plus random ones, so the estimate
// is biased low.
class ModelClassSampler final : public FunctionClassSampler {
public:
    ModelClassSampler(ModelKind kind, int dim, int hidden, double beta, double norm_bound,
                      std::vector<std::vector<double>> init_params, int restarts = 4,
                      int ascent_steps = 60, double step = 0.25);
    double sup_correlation(std::span<const int> signs, const std::vector<FeatureVec>& data,
                           std::mt19937_64& rng) const override;

private:
    ModelKind kind_;
    int dim_, hidden_;
    double beta_, norm_bound_;
    std::vector<std::vector<double>> inits_;
    int restarts_, ascent_steps_;
    double step_;
};

struct RademacherEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

// Monte Carlo over R >= 100 Rademacher sign vectors.
RademacherEstimate rademacher_empirical(const FunctionClassSampler& sampler,
                                        const std::vector<FeatureVec>& data, int draws,
                                        std::uint64_t seed);

struct AlphaPenalty {
    long long n_max = 0;
    double alpha = 1.0;  // sum_k pi_k N_max / N_k, >= 1
};

AlphaPenalty alpha_penalty(std::span<const long long> sample_counts,
                           std::span<const double> perron);

// Unique root of g(d) = delta. Throws std::invalid_argument if
// R_target >= phi(0) and a margin_too_large error (std::domain_error) if
// delta >= delta_max.
double solve_d_star(const LossSpec& loss, double R_target, double delta);

// sup{delta >= 0 : d*_delta < d_R} with d_R = inf{x : phi(x) = R_target}.
double delta_max(const LossSpec& loss, double R_target);

// E(R,delta) = (d*_delta - delta)/4.
double energy(const LossSpec& loss, double R_target, double delta);

struct BoundInputs {
    long long n_max = 0;
    double alpha = 1.0;
    double beta = 1.0;
    double rho = 0.0;       // network Rademacher complexity (or a valid upper bound)
    double r_target = 0.0;  // network average target risk, must be < phi(0)
};

struct BoundValue {
    double value = 0.0;
    bool vacuous = false;
};

// Lower bound on the probability of delta-margin consistent training:
// 1 - 2 exp{-8 N_max (E - rho)^2 / (alpha^2 beta^2)}, clamped to [0,1];
// vacuous (value 0) when rho >= E.
BoundValue consistency_bound(const BoundInputs& inputs, const LossSpec& loss, double delta);

// kappa = 8 beta log(K) / (1 - sigma).
double kappa(double beta, int K, double sigma);

// Streaming-error bound: Lemma term + exp{-(delta*S - kappa)^2/(2 beta^2 S)},
// clamped to [0,1]. Requires delta > 0 and S >= kappa/delta (throws
// std::domain_error below the regime).
BoundValue theorem1_bound(const BoundInputs& inputs, const LossSpec& loss, double delta,
                          double kappa_value, double S);

// N_eps such that the conditional streaming term equals eps.
double sample_complexity(double delta, double beta, double kappa_value, double epsilon);

// Single-sample bound: Lemma term + exp{-delta^2/(2 beta^2 sum_k pi_k^2)}.
BoundValue theorem2_bound(const BoundInputs& inputs, const LossSpec& loss, double delta,
                          std::span<const double> perron);

struct BoundReport {
    double d_star = 0.0;
    double energy = 0.0;
    double kappa = 0.0;
    double delta = 0.0;
    double delta_max = 0.0;
    double rho = 0.0;
    bool rho_is_estimate = false;  // ascent-based estimate rather than analytic bound
    double alpha = 1.0;
    long long n_max = 0;
    double r_target = 0.0;
    double sigma = 0.0;
    double p_c_delta_lower = 0.0;
    bool vacuous = false;
    double theorem2_bound = 0.0;
    bool theorem2_vacuous = false;
    double sample_complexity = 0.0;  // N_eps at the requested epsilon
    double epsilon = 0.0;
    std::vector<double> s_grid;
    std::vector<double> theorem1_values;  // clamped; vacuous entries equal 1
};

}  // namespace sml
