#include "sml/datagen.hpp"

#include <cmath>
#include <stdexcept>

#include "sml/rng.hpp"

namespace sml {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// KL(N(m1, D) || N(m2, D)) for shared diagonal covariance D.
double gaussian_kl(const GaussianSource& s) {
    double kl = 0.0;
    for (int j = 0; j < s.dim(); ++j) {
        double d = s.mean_plus[static_cast<size_t>(j)] - s.mean_minus[static_cast<size_t>(j)];
        kl += d * d / (2.0 * s.variances[static_cast<size_t>(j)]);
    }
    return kl;
}

FeatureVec draw(const GaussianSource& s, int gamma0, std::mt19937_64& rng) {
    const auto& mean = gamma0 == 1 ? s.mean_plus : s.mean_minus;
    FeatureVec h(static_cast<size_t>(s.dim()));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int j = 0; j < s.dim(); ++j)
        h[static_cast<size_t>(j)] =
            mean[static_cast<size_t>(j)] + std::sqrt(s.variances[static_cast<size_t>(j)]) * gauss(rng);
    return h;
}

}  // namespace

void GaussianSource::validate() const {
    if (mean_plus.empty()) throw std::invalid_argument("GaussianSource: empty mean vector");
    if (mean_minus.size() != mean_plus.size() || variances.size() != mean_plus.size())
        throw std::invalid_argument("GaussianSource: mean/variance dimensions disagree");
    for (double v : variances)
        if (!(v > 0.0))
            throw std::invalid_argument("GaussianSource: covariance must be positive definite");
}

void NetworkDataModel::validate() const {
    if (sources.empty()) throw std::invalid_argument("NetworkDataModel: no sources");
    if (!(class_prior > 0.0 && class_prior < 1.0))
        throw std::invalid_argument("NetworkDataModel: class prior must lie in (0,1)");
    for (const auto& s : sources) s.validate();
}

Stream sample_stream(const NetworkDataModel& model, int gamma0, int S, std::uint64_t seed) {
    model.validate();
    if (gamma0 != 1 && gamma0 != -1)
        throw std::invalid_argument("sample_stream: gamma0 must be +1 or -1");
    if (S < 1) throw std::invalid_argument("sample_stream: S must be >= 1");
    Stream stream;
    stream.obs.resize(static_cast<size_t>(model.agents()));
    for (int k = 0; k < model.agents(); ++k) {
        auto rng = make_rng(derive_seed(seed, SeedTag::agent, static_cast<std::uint64_t>(k)));
        auto& seq = stream.obs[static_cast<size_t>(k)];
        seq.reserve(static_cast<size_t>(S));
        for (int i = 0; i < S; ++i) seq.push_back(draw(model.sources[static_cast<size_t>(k)], gamma0, rng));
    }
    return stream;
}

TrainingSet sample_training_set(const GaussianSource& source, int N, std::uint64_t seed) {
    source.validate();
    if (N < 2 || N % 2 != 0)
        throw std::invalid_argument("sample_training_set: N must be even and >= 2");
    auto rng = make_rng(seed);
    std::vector<Sample> samples;
    samples.reserve(static_cast<size_t>(N));
    for (int n = 0; n < N / 2; ++n) samples.push_back({draw(source, +1, rng), +1});
    for (int n = 0; n < N / 2; ++n) samples.push_back({draw(source, -1, rng), -1});
    return TrainingSet(std::move(samples));
}

double true_llr(const GaussianSource& source, std::span<const double> h) {
    if (static_cast<int>(h.size()) != source.dim())
        throw std::invalid_argument("true_llr: dimension mismatch");
    double llr = 0.0;
    for (int j = 0; j < source.dim(); ++j) {
        double dp = h[j] - source.mean_plus[static_cast<size_t>(j)];
        double dm = h[j] - source.mean_minus[static_cast<size_t>(j)];
        llr += (dm * dm - dp * dp) / (2.0 * source.variances[static_cast<size_t>(j)]);
    }
    return llr;
}

WeightedKl weighted_kl(const NetworkDataModel& model, std::span<const double> perron) {
    model.validate();
    if (perron.size() != static_cast<size_t>(model.agents()))
        throw std::invalid_argument("weighted_kl: perron size mismatch");
    WeightedKl out;
    for (int k = 0; k < model.agents(); ++k) {
        // shared per-class covariance makes the divergence symmetric
        double kl = gaussian_kl(model.sources[static_cast<size_t>(k)]);
        out.delta_plus += perron[k] * kl;
        out.delta_minus += perron[k] * kl;
    }
    out.delta_min = std::min(out.delta_plus, out.delta_minus);
    return out;
}

double oracle_error_probability(const NetworkDataModel& model, std::span<const double> perron,
                                int S) {
    model.validate();
    if (S < 1) throw std::invalid_argument("oracle_error_probability: S must be >= 1");
    if (perron.size() != static_cast<size_t>(model.agents()))
        throw std::invalid_argument("oracle_error_probability: perron size mismatch");
    double mean = 0.0, var = 0.0;
    for (int k = 0; k < model.agents(); ++k) {
        double kl = gaussian_kl(model.sources[static_cast<size_t>(k)]);
        mean += perron[k] * kl;
        var += perron[k] * perron[k] * 2.0 * kl;
    }
    if (var == 0.0) return 0.5;  // zero-information limit
    return normal_cdf(-static_cast<double>(S) * mean / std::sqrt(static_cast<double>(S) * var));
}

namespace {

TrainedAgent oracle_base(const GaussianSource& source, double beta) {
    source.validate();
    if (beta <= 0.0) throw std::invalid_argument("make_oracle_agent: beta must be positive");
    TrainedAgent agent;
    agent.model.kind = ModelKind::oracle_llr;
    agent.model.beta = beta;
    agent.model.dim = source.dim();
    agent.model.params.reserve(static_cast<size_t>(3 * source.dim()));
    agent.model.params.insert(agent.model.params.end(), source.mean_plus.begin(), source.mean_plus.end());
    agent.model.params.insert(agent.model.params.end(), source.mean_minus.begin(), source.mean_minus.end());
    agent.model.params.insert(agent.model.params.end(), source.variances.begin(), source.variances.end());
    agent.training_mean = 0.0;
    agent.train_config_digest = "kind=oracle_llr";
    return agent;
}

}  // namespace

TrainedAgent make_oracle_agent(const GaussianSource& source, double beta) {
    return oracle_base(source, beta);
}

TrainedAgent make_oracle_agent(const GaussianSource& source, double beta, const TrainingSet& data) {
    TrainedAgent agent = oracle_base(source, beta);
    double mean = 0.0;
    for (const auto& s : data.samples()) mean += agent.model.value(s.features);
    agent.training_mean = mean / static_cast<double>(data.size());
    return agent;
}

}  // namespace sml
