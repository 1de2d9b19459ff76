#include "sml/prediction.hpp"

#include <cmath>

namespace sml {

namespace {

std::vector<double> statistics_at(const std::vector<TrainedAgent>& agents, const Stream& stream,
                                  int i) {
    std::vector<double> c(agents.size());
    for (size_t k = 0; k < agents.size(); ++k)
        c[k] = debiased_statistic(agents[k], stream.obs[k][static_cast<size_t>(i)]);
    return c;
}

}  // namespace

BeliefState social_learning_step(const BeliefState& state, std::span<const double> statistics,
                                 const CombinationMatrix& A) {
    const int K = A.size();
    if (static_cast<int>(state.lambdas.size()) != K ||
        static_cast<int>(statistics.size()) != K)
        throw std::invalid_argument("social_learning_step: dimension mismatch");
    for (double c : statistics)
        if (!std::isfinite(c))
            throw std::invalid_argument("social_learning_step: non-finite statistic");

    BeliefState next;
    next.lambdas.assign(static_cast<size_t>(K), 0.0);
    next.time = state.time + 1;
    for (int k = 0; k < K; ++k) {
        double acc = 0.0;
        for (int l = 0; l < K; ++l)
            acc += A.entry(l, k) * (state.lambdas[static_cast<size_t>(l)] + statistics[static_cast<size_t>(l)]);
        next.lambdas[static_cast<size_t>(k)] = acc;
    }
    return next;
}

DecisionTrace run_statistical_classification(const std::vector<TrainedAgent>& agents,
                                             const CombinationMatrix& A, const Stream& stream) {
    const int K = A.size();
    if (static_cast<int>(agents.size()) != K || stream.agents() != K)
        throw std::invalid_argument("run_statistical_classification: K mismatch");
    const int S = stream.length();

    DecisionTrace trace;
    trace.lambdas.reserve(static_cast<size_t>(S));
    trace.decisions.reserve(static_cast<size_t>(S));
    BeliefState state = BeliefState::zeros(K);
    for (int i = 0; i < S; ++i) {
        state = social_learning_step(state, statistics_at(agents, stream, i), A);
        trace.lambdas.push_back(state.lambdas);
        std::vector<Decision> d(static_cast<size_t>(K));
        for (int k = 0; k < K; ++k) d[static_cast<size_t>(k)] = decide(state.lambdas[static_cast<size_t>(k)]);
        trace.decisions.push_back(std::move(d));
    }
    trace.final_state = std::move(state);
    return trace;
}

ConsensusResult consensus_single_sample(const std::vector<TrainedAgent>& agents,
                                        const CombinationMatrix& A,
                                        const std::vector<FeatureVec>& observations, double tol,
                                        int t_max) {
    const int K = A.size();
    if (static_cast<int>(agents.size()) != K || static_cast<int>(observations.size()) != K)
        throw std::invalid_argument("consensus_single_sample: K mismatch");
    if (!(tol > 0.0)) throw std::invalid_argument("consensus_single_sample: tol must be positive");

    std::vector<double> lambdas(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k)
        lambdas[static_cast<size_t>(k)] = debiased_statistic(agents[static_cast<size_t>(k)],
                                                             observations[static_cast<size_t>(k)]);

    const std::vector<double> pi = spectral_analysis(A).perron;
    double limit = 0.0;
    for (int k = 0; k < K; ++k) limit += pi[static_cast<size_t>(k)] * lambdas[static_cast<size_t>(k)];

    int t = 1;
    std::vector<double> next(static_cast<size_t>(K));
    for (; t <= t_max; ++t) {
        double step_change = 0.0;
        for (int k = 0; k < K; ++k) {
            double acc = 0.0;
            for (int l = 0; l < K; ++l) acc += A.entry(l, k) * lambdas[static_cast<size_t>(l)];
            next[static_cast<size_t>(k)] = acc;
            step_change = std::max(step_change, std::abs(acc - lambdas[static_cast<size_t>(k)]));
        }
        lambdas.swap(next);
        if (step_change < tol) {
            ConsensusResult res;
            res.lambda_s = lambdas[0];
            res.decision = decide(lambdas[0]);
            res.rounds = t;  // combination rounds performed after lambda_{k,1}
            double cert = 0.0;
            for (int k = 0; k < K; ++k)
                cert = std::max(cert, std::abs(lambdas[static_cast<size_t>(k)] - limit));
            res.certificate = cert;
            return res;
        }
    }
    throw ConsensusFailure(std::move(lambdas), t);
}

double bounded_difference_check(const std::vector<TrainedAgent>& agents,
                                const CombinationMatrix& A, const Stream& stream,
                                const Perturbation& perturb, int observer) {
    const int K = A.size();
    const int S = stream.length();
    if (perturb.agent < 0 || perturb.agent >= K || perturb.time < 0 || perturb.time >= S)
        throw std::invalid_argument("bounded_difference_check: perturbation indices out of range");
    if (observer < 0 || observer >= K)
        throw std::invalid_argument("bounded_difference_check: observer out of range");

    DecisionTrace base = run_statistical_classification(agents, A, stream);
    Stream modified = stream;
    modified.obs[static_cast<size_t>(perturb.agent)][static_cast<size_t>(perturb.time)] =
        perturb.replacement;
    DecisionTrace alt = run_statistical_classification(agents, A, modified);
    return std::abs(base.lambdas[static_cast<size_t>(S - 1)][static_cast<size_t>(observer)] -
                    alt.lambdas[static_cast<size_t>(S - 1)][static_cast<size_t>(observer)]);
}

}  // namespace sml
