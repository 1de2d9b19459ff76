#pragma once
// Prediction-phase dynamics: the geometric social-learning recursion for
// streaming classification and the averaging consensus for single-sample
// classification.
//
// Update rule: lambda_{k,i} = sum_l a_{lk} (lambda_{l,i-1} + c_l(h_{l,i})),
// with lambda_{k,0} = 0. Decisions follow the sign of lambda; lambda = 0 is
// recorded as a tie and counts as an error everywhere errors are tallied.

#include <span>
#include <stdexcept>
#include <vector>

#include "sml/datagen.hpp"
#include "sml/network.hpp"
#include "sml/training.hpp"

namespace sml {

struct BeliefState {
    std::vector<double> lambdas;
    int time = 0;

    static BeliefState zeros(int K) { return BeliefState{std::vector<double>(static_cast<size_t>(K), 0.0), 0}; }
};

enum class Decision : int { minus = -1, tie = 0, plus = 1 };

inline Decision decide(double lambda) {
    if (lambda > 0.0) return Decision::plus;
    if (lambda < 0.0) return Decision::minus;
    return Decision::tie;
}

struct DecisionTrace {
    // lambdas[i][k], decisions[i][k] for time i = 1..S (index i-1)
    std::vector<std::vector<double>> lambdas;
    std::vector<std::vector<Decision>> decisions;
    BeliefState final_state;

    // misclassification event gamma0 * lambda <= 0 (tie counts as error)
    bool error_at(int k, int i, int gamma0) const {
        return gamma0 * lambdas[static_cast<size_t>(i)][static_cast<size_t>(k)] <= 0.0;
    }
};

// One step of the recursion. Throws std::invalid_argument on dimension
// mismatch or non-finite statistics.
BeliefState social_learning_step(const BeliefState& state, std::span<const double> statistics,
                                 const CombinationMatrix& A);

// Runs S steps from the all-zero belief, pulling statistics from the
// agents' debiased classifiers.
DecisionTrace run_statistical_classification(const std::vector<TrainedAgent>& agents,
                                             const CombinationMatrix& A, const Stream& stream);

struct ConsensusResult {
    double lambda_s = 0.0;      // agent-1 value at termination
    Decision decision = Decision::tie;
    int rounds = 0;
    double certificate = 0.0;   // max_k |lambda_k - sum_l pi_l c_l|
};

struct ConsensusFailure : std::runtime_error {
    std::vector<double> partial_lambdas;
    int rounds;
    ConsensusFailure(std::vector<double> lambdas, int t)
        : std::runtime_error("consensus_single_sample: t_max reached before tolerance"),
          partial_lambdas(std::move(lambdas)),
          rounds(t) {}
};

// Averaging consensus from lambda_{k,1} = c_k(h_k): iterate the combination
// step until max_k |lambda_{k,t} - lambda_{k,t-1}| < tol or t_max rounds.
// The certificate reports the true distance to the pi-weighted limit.
ConsensusResult consensus_single_sample(const std::vector<TrainedAgent>& agents,
                                        const CombinationMatrix& A,
                                        const std::vector<FeatureVec>& observations, double tol,
                                        int t_max);

struct Perturbation {
    int agent = 0;  // l
    int time = 0;   // tau, 0-based index into the stream
    FeatureVec replacement;
};

// |lambda_{k,S}(original) - lambda_{k,S}(perturbed)| at the final time of
// the stream, for observer agent k. Bounded by 2*[A^{S-tau}]_{lk}*beta
// (with tau 1-based that is the power S+1-tau).
double bounded_difference_check(const std::vector<TrainedAgent>& agents,
                                const CombinationMatrix& A, const Stream& stream,
                                const Perturbation& perturb, int observer);

}  // namespace sml
