#pragma once
// Comparison strategy: agents trained sequentially with boosted sample
// weights, hard decisions combined centrally with training-accuracy
// weights. The agents hold disjoint feature views of index-aligned samples,
// so agent j+1 upweights its own samples at the indices agent j
// misclassified.

#include <vector>

#include "sml/losses.hpp"
#include "sml/training.hpp"

namespace sml {

struct BoostEnsemble {
    std::vector<BoundedModel> models;
    std::vector<double> accuracies;  // unweighted training accuracy a_k in [0,1]
};

// Trains agents in index order. After agent j trains, the shared weight
// vector is updated with the classical exp(-+ stage weight) multipliers,
// where the stage weight is the half log-odds of agent j's weighted error;
// weights renormalize to sum 1 after every stage. All training sets must
// have equal, index-aligned sizes.
BoostEnsemble train_adaboost(const std::vector<TrainingSet>& datasets, const LossSpec& loss,
                             ModelKind kind, const TrainHyper& hyper, int hidden = 15);

// sign(sum_k a_k sign(f_k(h_k))): +1, -1, or 0 for an exact tie
// (ties count as errors in all tallies).
int adaboost_predict(const BoostEnsemble& ensemble, const std::vector<FeatureVec>& observations);

}  // namespace sml
