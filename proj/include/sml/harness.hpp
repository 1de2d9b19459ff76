#pragma once
// Experiment orchestration: seeded Monte Carlo sweeps for the streaming
// error, margin-vs-training-size curves, consistency probability, and the
// single-sample comparison. Work splits into cells indexed by
// (training set, run block); every cell derives its seeds from the master
// seed and the cell index, and results merge in index order, so outputs are
// byte-identical for any worker count.

#include <cstdint>
#include <string>
#include <vector>

#include "sml/adaboost.hpp"
#include "sml/config.hpp"
#include "sml/prediction.hpp"
#include "sml/theory.hpp"

namespace sml {

// Trains one set of agents for training-set index t (seeds derive from
// cfg.seed). Oracle model kind yields clipped-LLR agents with zero training
// mean (pure oracle statistics).
std::vector<TrainedAgent> train_network_agents(const ExperimentConfig& cfg, int t);
std::vector<TrainedAgent> train_network_agents(const ExperimentConfig& cfg, int t,
                                               const std::vector<int>& n_per_agent);

struct ErrorCell {
    long long trials = 0;
    long long errors = 0;
};

struct ErrorsResult {
    std::string strategy;
    int T = 0, K = 0, S = 0;
    // cells[t][k][i]; for centralized strategies K == 1 and k,0 holds the
    // ensemble decision tallies
    std::vector<std::vector<std::vector<ErrorCell>>> cells;

    // pooled over training sets
    ErrorCell pooled(int k, int i) const;
    double pooled_rate(int k, int i) const;
};

// Streaming misclassification tallies gamma0*lambda_{k,i} <= 0 for the
// social-learning strategy.
ErrorsResult estimate_instantaneous_error(const ExperimentConfig& cfg);

// Same protocol for the boosting baseline (centralized hard-vote decision,
// no temporal aggregation).
ErrorsResult estimate_instantaneous_error_adaboost(const ExperimentConfig& cfg);

struct MarginRow {
    int n0 = 0;
    int training_set_id = 0;
    double delta_plus = 0.0;
    double delta_minus = 0.0;
    double delta_achieved = 0.0;
    double se = 0.0;  // Monte Carlo standard error of the binding side
};

struct MarginsResult {
    std::vector<MarginRow> rows;
    double mean_delta(int n0) const;
    double se_of_mean(int n0) const;  // spread over training sets
};

// Achieved decision margins per (N0, training set).
MarginsResult estimate_margin_vs_training_size(const ExperimentConfig& cfg,
                                               const std::vector<int>& n0_list);

struct ConsistencyEstimate {
    double p_hat = 0.0;
    double ci_halfwidth = 0.0;
    int satisfied = 0;
    int total = 0;
};

// Fraction of training sets whose margins clear delta on both sides
// (strict inequalities). Requires cfg.training_sets >= 30.
ConsistencyEstimate estimate_consistency_probability(const ExperimentConfig& cfg, double delta);

struct SingleSampleRow {
    std::string strategy;  // "noncooperative", "sml", "adaboost"
    int n0 = 0;
    int training_set_id = 0;
    int agent = -1;  // -1 for ensemble strategies
    long long trials = 0;
    long long errors = 0;
};

struct SingleSampleResult {
    std::vector<SingleSampleRow> rows;
    double pooled_rate(const std::string& strategy, int n0, int agent = -1) const;
    long long pooled_trials(const std::string& strategy, int n0, int agent = -1) const;
};

// Per-agent non-cooperative, pi-weighted ensemble, and boosting errors on
// one observation per agent, with the true label drawn from the class prior.
SingleSampleResult run_single_sample_experiment(const ExperimentConfig& cfg,
                                                const std::vector<int>& n0_list);

// CSV emission (fixed schemas, see README.md).
void write_errors_csv(const std::string& path, const ErrorsResult& result);
void write_margins_csv(const std::string& path, const MarginsResult& result);
void write_single_sample_csv(const std::string& path, const SingleSampleResult& result);

// Bound report for the current config; agents provide the training means
// and, for non-analytic classes, the Rademacher ascent inits.
BoundReport compute_bound_report(const ExperimentConfig& cfg,
                                 const std::vector<TrainedAgent>& agents);
std::string bound_report_to_json(const BoundReport& report);
void write_theorem1_csv(const std::string& path, const BoundReport& report);

}  // namespace sml
