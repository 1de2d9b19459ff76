#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "sml/adaboost.hpp"
#include "sml/rng.hpp"
#include "sml/datagen.hpp"

using namespace sml;

namespace {

TrainHyper quick_hyper(double beta, std::uint64_t seed) {
    TrainHyper h;
    h.beta = beta;
    h.batch = 10;
    h.epochs = 10;
    h.rate = 0.1;
    h.seed = seed;
    return h;
}

}  // namespace

TEST_CASE("single-agent boosting reduces to plain training plus accuracy") {
    GaussianSource src{{1.2}, {-1.2}, {0.5}};
    TrainingSet data = sample_training_set(src, 60, 5);
    LossSpec logistic = make_loss("logistic", 1.0);
    TrainHyper hyper = quick_hyper(1.0, 17);

    BoostEnsemble ensemble = train_adaboost({data}, logistic, ModelKind::linear, hyper);
    REQUIRE(ensemble.models.size() == 1);

    TrainHyper solo = hyper;
    solo.seed = derive_seed(hyper.seed, SeedTag::agent, 0);
    std::vector<double> uniform(static_cast<size_t>(data.size()), 1.0 / data.size());
    TrainedAgent reference = train_erm_weighted(data, logistic, ModelKind::linear, solo, uniform);
    CHECK(ensemble.models[0].params == reference.model.params);

    int correct = 0;
    for (const auto& s : data.samples())
        if (s.label * ensemble.models[0].value(s.features) > 0.0) ++correct;
    CHECK(ensemble.accuracies[0] == doctest::Approx(static_cast<double>(correct) / data.size()));
}

TEST_CASE("a perfect first agent leaves the next agent's weights uniform") {
    // agent 0 sees a trivially separable view; agent 1's training must then
    // coincide with uniform-weight training
    GaussianSource easy{{10.0}, {-10.0}, {0.01}};
    GaussianSource hard{{0.3}, {-0.3}, {1.0}};
    TrainingSet d0 = sample_training_set(easy, 40, 2);
    TrainingSet d1 = sample_training_set(hard, 40, 3);
    LossSpec logistic = make_loss("logistic", 1.0);
    TrainHyper hyper = quick_hyper(1.0, 29);

    BoostEnsemble ensemble = train_adaboost({d0, d1}, logistic, ModelKind::linear, hyper);
    REQUIRE(ensemble.accuracies[0] == 1.0);

    TrainHyper solo = hyper;
    solo.seed = derive_seed(hyper.seed, SeedTag::agent, 1);
    std::vector<double> uniform(40, 1.0 / 40);
    TrainedAgent reference = train_erm_weighted(d1, logistic, ModelKind::linear, solo, uniform);
    CHECK(ensemble.models[1].params == reference.model.params);
}

TEST_CASE("misaligned dataset sizes are rejected") {
    GaussianSource src{{1.0}, {-1.0}, {1.0}};
    TrainingSet a = sample_training_set(src, 40, 2);
    TrainingSet b = sample_training_set(src, 60, 3);
    LossSpec logistic = make_loss("logistic", 1.0);
    CHECK_THROWS_AS(train_adaboost({a, b}, logistic, ModelKind::linear, quick_hyper(1.0, 1)),
                    std::invalid_argument);
}

TEST_CASE("accuracy-weighted hard voting") {
    BoostEnsemble ensemble;
    // two 1-d models with fixed signs: f(h) = beta*tanh(w h)
    for (double w : {5.0, 5.0}) {
        BoundedModel m = BoundedModel::make_linear(1, 1.0);
        m.params[0] = w;
        ensemble.models.push_back(m);
    }

    SUBCASE("unanimous positive votes") {
        ensemble.accuracies = {0.7, 0.7};
        std::vector<FeatureVec> obs = {{1.0}, {2.0}};
        CHECK(adaboost_predict(ensemble, obs) == +1);
    }
    SUBCASE("accuracy 0.9 beats 0.6 on opposite votes") {
        ensemble.accuracies = {0.9, 0.6};
        std::vector<FeatureVec> obs = {{1.0}, {-1.0}};  // votes +1, -1
        CHECK(adaboost_predict(ensemble, obs) == +1);
    }
    SUBCASE("equal accuracies cancel to a tie") {
        ensemble.accuracies = {0.8, 0.8};
        std::vector<FeatureVec> obs = {{1.0}, {-1.0}};
        CHECK(adaboost_predict(ensemble, obs) == 0);
    }
}

TEST_CASE("frozen ensemble decisions are i.i.d. across stream times") {
    // no temporal aggregation: the lag-1 autocorrelation of the decision
    // sequence is zero within Monte Carlo error
    GaussianSource src{{0.5}, {-0.5}, {1.0}};
    NetworkDataModel model;
    model.sources.push_back(src);
    model.sources.push_back(src);
    TrainingSet d0 = sample_training_set(src, 60, 11);
    TrainingSet d1 = sample_training_set(src, 60, 12);
    LossSpec logistic = make_loss("logistic", 1.0);
    BoostEnsemble ensemble = train_adaboost({d0, d1}, logistic, ModelKind::linear, quick_hyper(1.0, 13));

    const int S = 20000;
    Stream stream = sample_stream(model, +1, S, 404);
    std::vector<double> decisions;
    for (int i = 0; i < S; ++i) {
        std::vector<FeatureVec> obs = {stream.obs[0][static_cast<size_t>(i)],
                                       stream.obs[1][static_cast<size_t>(i)]};
        decisions.push_back(adaboost_predict(ensemble, obs));
    }
    double mean = 0.0;
    for (double d : decisions) mean += d;
    mean /= S;
    double num = 0.0, den = 0.0;
    for (int i = 0; i + 1 < S; ++i) {
        num += (decisions[static_cast<size_t>(i)] - mean) * (decisions[static_cast<size_t>(i + 1)] - mean);
        den += (decisions[static_cast<size_t>(i)] - mean) * (decisions[static_cast<size_t>(i)] - mean);
    }
    double autocorr = num / den;
    CHECK(std::abs(autocorr) < 4.0 / std::sqrt(static_cast<double>(S)));
}
