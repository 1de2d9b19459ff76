#include "sml/adaboost.hpp"

#include <cmath>
#include <stdexcept>

#include "sml/rng.hpp"

namespace sml {

BoostEnsemble train_adaboost(const std::vector<TrainingSet>& datasets, const LossSpec& loss,
                             ModelKind kind, const TrainHyper& hyper, int hidden) {
    if (datasets.empty()) throw std::invalid_argument("train_adaboost: no datasets");
    const int K = static_cast<int>(datasets.size());
    const int N = datasets[0].size();
    for (const auto& d : datasets)
        if (d.size() != N)
            throw std::invalid_argument("train_adaboost: datasets must be index-aligned (equal sizes)");

    BoostEnsemble ensemble;
    std::vector<double> weights(static_cast<size_t>(N), 1.0 / N);

    for (int k = 0; k < K; ++k) {
        TrainHyper h = hyper;
        h.seed = derive_seed(hyper.seed, SeedTag::agent, static_cast<std::uint64_t>(k));
        TrainedAgent agent = train_erm_weighted(datasets[static_cast<size_t>(k)], loss, kind, h,
                                                weights, hidden);

        const auto& samples = datasets[static_cast<size_t>(k)].samples();
        int correct = 0;
        double weighted_error = 0.0;
        std::vector<char> miss(static_cast<size_t>(N), 0);
        for (int n = 0; n < N; ++n) {
            double f = agent.model.value(samples[static_cast<size_t>(n)].features);
            bool ok = samples[static_cast<size_t>(n)].label * f > 0.0;
            if (ok) {
                ++correct;
            } else {
                miss[static_cast<size_t>(n)] = 1;
                weighted_error += weights[static_cast<size_t>(n)];
            }
        }
        ensemble.models.push_back(agent.model);
        ensemble.accuracies.push_back(static_cast<double>(correct) / N);

        // reweight for the next agent; a perfect stage leaves weights unchanged
        if (k + 1 < K && weighted_error > 0.0 && weighted_error < 1.0) {
            double stage = 0.5 * std::log((1.0 - weighted_error) / weighted_error);
            double total = 0.0;
            for (int n = 0; n < N; ++n) {
                weights[static_cast<size_t>(n)] *=
                    std::exp(miss[static_cast<size_t>(n)] ? stage : -stage);
                total += weights[static_cast<size_t>(n)];
            }
            for (double& w : weights) w /= total;
        }
    }
    return ensemble;
}

int adaboost_predict(const BoostEnsemble& ensemble, const std::vector<FeatureVec>& observations) {
    if (observations.size() != ensemble.models.size())
        throw std::invalid_argument("adaboost_predict: observation count mismatch");
    double vote = 0.0;
    for (size_t k = 0; k < ensemble.models.size(); ++k) {
        double f = ensemble.models[k].value(observations[k]);
        int hard = f > 0.0 ? +1 : (f < 0.0 ? -1 : 0);
        vote += ensemble.accuracies[k] * hard;
    }
    if (vote > 0.0) return +1;
    if (vote < 0.0) return -1;
    return 0;
}

}  // namespace sml
