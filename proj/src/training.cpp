#include "sml/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sml/rng.hpp"

namespace sml {

namespace {

void check_dim(const BoundedModel& m, std::span<const double> h) {
    if (static_cast<int>(h.size()) != m.dim)
        throw std::invalid_argument("model expects dimension " + std::to_string(m.dim) +
                                    ", got " + std::to_string(h.size()));
}

double bound_wrap(double g, double beta) { return beta * std::tanh(g / beta); }

}  // namespace

TrainingSet::TrainingSet(std::vector<Sample> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw std::invalid_argument("TrainingSet: empty sample list");
    const size_t dim = samples_[0].features.size();
    int plus = 0, minus = 0;
    for (const auto& s : samples_) {
        if (s.label != 1 && s.label != -1)
            throw std::invalid_argument("TrainingSet: labels must be +1 or -1");
        if (s.features.size() != dim)
            throw std::invalid_argument("TrainingSet: inconsistent feature dimensions");
        (s.label == 1 ? plus : minus)++;
    }
    if (plus != minus)
        throw std::invalid_argument("TrainingSet: set must be balanced (" + std::to_string(plus) +
                                    " positive vs " + std::to_string(minus) + " negative)");
}

TrainingSet TrainingSet::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open training CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty training CSV: " + path);
    std::vector<Sample> samples;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> values;
        while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
        if (values.size() < 2) throw std::runtime_error("bad row in training CSV: " + line);
        Sample s;
        s.label = static_cast<int>(values.back());
        values.pop_back();
        s.features = std::move(values);
        samples.push_back(std::move(s));
    }
    return TrainingSet(std::move(samples));
}

void TrainingSet::to_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write training CSV: " + path);
    const int d = dim();
    for (int j = 0; j < d; ++j) out << "f" << j << ",";
    out << "label\n";
    char buf[64];
    for (const auto& s : samples_) {
        for (double v : s.features) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf << ",";
        }
        out << s.label << "\n";
    }
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "linear") return ModelKind::linear;
    if (s == "mlp") return ModelKind::mlp;
    if (s == "oracle_llr" || s == "oracle") return ModelKind::oracle_llr;
    throw std::invalid_argument("unknown model kind: " + s);
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::linear: return "linear";
        case ModelKind::mlp: return "mlp";
        case ModelKind::oracle_llr: return "oracle_llr";
    }
    return "?";
}

BoundedModel BoundedModel::make_linear(int dim, double beta) {
    BoundedModel m;
    m.kind = ModelKind::linear;
    m.beta = beta;
    m.dim = dim;
    m.params.assign(static_cast<size_t>(dim) + 1, 0.0);
    return m;
}

BoundedModel BoundedModel::make_mlp(int dim, int hidden, double beta, std::uint64_t seed) {
    BoundedModel m;
    m.kind = ModelKind::mlp;
    m.beta = beta;
    m.dim = dim;
    m.hidden = hidden;
    m.params.assign(static_cast<size_t>(dim) * hidden + hidden + 2 * hidden + 2, 0.0);
    auto rng = make_rng(derive_seed(seed, SeedTag::init, 0));
    double scale0 = 1.0 / std::sqrt(static_cast<double>(dim));
    double scale1 = 1.0 / std::sqrt(static_cast<double>(hidden));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    size_t p = 0;
    for (int i = 0; i < dim * hidden; ++i) m.params[p++] = scale0 * u(rng);
    for (int i = 0; i < hidden; ++i) m.params[p++] = scale0 * u(rng);
    for (int i = 0; i < 2 * hidden; ++i) m.params[p++] = scale1 * u(rng);
    for (int i = 0; i < 2; ++i) m.params[p++] = scale1 * u(rng);
    return m;
}

double BoundedModel::raw(std::span<const double> h) const {
    check_dim(*this, h);
    switch (kind) {
        case ModelKind::linear: {
            double g = params[static_cast<size_t>(dim)];
            for (int j = 0; j < dim; ++j) g += params[static_cast<size_t>(j)] * h[j];
            return g;
        }
        case ModelKind::mlp: {
            const double* W0 = params.data();
            const double* th0 = W0 + static_cast<size_t>(dim) * hidden;
            const double* W1 = th0 + hidden;
            const double* th1 = W1 + static_cast<size_t>(hidden) * 2;
            double z[2] = {-th1[0], -th1[1]};
            for (int i = 0; i < hidden; ++i) {
                double a = -th0[i];
                for (int j = 0; j < dim; ++j) a += W0[static_cast<size_t>(j) * hidden + i] * h[j];
                double t = std::tanh(a);
                z[0] += W1[static_cast<size_t>(i) * 2 + 0] * t;
                z[1] += W1[static_cast<size_t>(i) * 2 + 1] * t;
            }
            return z[0] - z[1];
        }
        case ModelKind::oracle_llr: {
            const double* mp = params.data();
            const double* mm = mp + dim;
            const double* var = mm + dim;
            double llr = 0.0;
            for (int j = 0; j < dim; ++j) {
                double dp = h[j] - mp[j], dm = h[j] - mm[j];
                llr += (dm * dm - dp * dp) / (2.0 * var[j]);
            }
            return llr;
        }
    }
    return 0.0;
}

double BoundedModel::value(std::span<const double> h) const {
    double g = raw(h);
    if (kind == ModelKind::oracle_llr) return std::clamp(g, -beta, beta);
    return bound_wrap(g, beta);
}

double BoundedModel::value_and_grad(std::span<const double> h, std::span<double> grad) const {
    check_dim(*this, h);
    if (grad.size() != params.size())
        throw std::invalid_argument("value_and_grad: gradient buffer size mismatch");
    if (kind == ModelKind::oracle_llr)
        throw std::invalid_argument("value_and_grad: oracle model is not trainable");

    if (kind == ModelKind::linear) {
        double g = params[static_cast<size_t>(dim)];
        for (int j = 0; j < dim; ++j) g += params[static_cast<size_t>(j)] * h[j];
        double t = std::tanh(g / beta);
        double dfd_g = 1.0 - t * t;  // d(beta*tanh(g/beta))/dg
        for (int j = 0; j < dim; ++j) grad[static_cast<size_t>(j)] = dfd_g * h[j];
        grad[static_cast<size_t>(dim)] = dfd_g;
        return beta * t;
    }

    // mlp backprop
    const double* W0 = params.data();
    const double* th0 = W0 + static_cast<size_t>(dim) * hidden;
    const double* W1 = th0 + hidden;
    const double* th1 = W1 + static_cast<size_t>(hidden) * 2;
    std::vector<double> hid(hidden);
    double z[2] = {-th1[0], -th1[1]};
    for (int i = 0; i < hidden; ++i) {
        double a = -th0[i];
        for (int j = 0; j < dim; ++j) a += W0[static_cast<size_t>(j) * hidden + i] * h[j];
        hid[static_cast<size_t>(i)] = std::tanh(a);
        z[0] += W1[static_cast<size_t>(i) * 2 + 0] * hid[static_cast<size_t>(i)];
        z[1] += W1[static_cast<size_t>(i) * 2 + 1] * hid[static_cast<size_t>(i)];
    }
    double g = z[0] - z[1];
    double t = std::tanh(g / beta);
    double dfd_g = 1.0 - t * t;

    double* gW0 = grad.data();
    double* gth0 = gW0 + static_cast<size_t>(dim) * hidden;
    double* gW1 = gth0 + hidden;
    double* gth1 = gW1 + static_cast<size_t>(hidden) * 2;
    // dg/dz = (1, -1)
    gth1[0] = -dfd_g;
    gth1[1] = dfd_g;
    for (int i = 0; i < hidden; ++i) {
        double ti = hid[static_cast<size_t>(i)];
        gW1[static_cast<size_t>(i) * 2 + 0] = dfd_g * ti;
        gW1[static_cast<size_t>(i) * 2 + 1] = -dfd_g * ti;
        double back = dfd_g * (W1[static_cast<size_t>(i) * 2 + 0] - W1[static_cast<size_t>(i) * 2 + 1]) *
                      (1.0 - ti * ti);
        gth0[i] = -back;
        for (int j = 0; j < dim; ++j) gW0[static_cast<size_t>(j) * hidden + i] = back * h[j];
    }
    return beta * t;
}

std::string TrainedAgent::to_json() const {
    nlohmann::json j;
    j["kind"] = to_string(model.kind);
    j["beta"] = model.beta;
    j["dim"] = model.dim;
    j["hidden"] = model.hidden;
    j["params"] = model.params;
    j["training_mean"] = training_mean;
    j["seed"] = seed;
    j["digest"] = train_config_digest;
    return j.dump();
}

TrainedAgent TrainedAgent::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    TrainedAgent a;
    a.model.kind = model_kind_from_string(j.at("kind").get<std::string>());
    a.model.beta = j.at("beta").get<double>();
    a.model.dim = j.at("dim").get<int>();
    a.model.hidden = j.at("hidden").get<int>();
    a.model.params = j.at("params").get<std::vector<double>>();
    a.training_mean = j.at("training_mean").get<double>();
    a.seed = j.at("seed").get<std::uint64_t>();
    a.train_config_digest = j.value("digest", "");
    return a;
}

double empirical_risk(const BoundedModel& model, const TrainingSet& data, const LossSpec& loss) {
    const auto& samples = data.samples();
    double acc = 0.0;
    for (const auto& s : samples) acc += loss.eval(s.label * model.value(s.features));
    return acc / static_cast<double>(samples.size());
}

double empirical_risk_weighted(const BoundedModel& model, const TrainingSet& data,
                               const LossSpec& loss, std::span<const double> weights) {
    const auto& samples = data.samples();
    if (weights.size() != samples.size())
        throw std::invalid_argument("empirical_risk_weighted: weight count mismatch");
    double acc = 0.0;
    for (size_t n = 0; n < samples.size(); ++n)
        acc += weights[n] * loss.eval(samples[n].label * model.value(samples[n].features));
    return acc;
}

namespace {

TrainedAgent train_impl(const TrainingSet& data, const LossSpec& loss, ModelKind kind,
                        const TrainHyper& hyper, const double* weights, int hidden) {
    if (hyper.rate <= 0.0) throw std::invalid_argument("train_erm: learning rate must be positive");
    if (hyper.batch < 1) throw std::invalid_argument("train_erm: batch must be >= 1");
    if (kind == ModelKind::oracle_llr)
        throw std::invalid_argument("train_erm: oracle model is not trainable");

    if (hyper.beta <= 0.0) throw std::invalid_argument("train_erm: beta must be positive");

    const int N = data.size();
    const int dim = data.dim();
    BoundedModel model = (kind == ModelKind::linear)
                             ? BoundedModel::make_linear(dim, hyper.beta)
                             : BoundedModel::make_mlp(dim, hidden, hyper.beta, hyper.seed);

    auto risk_of = [&](const BoundedModel& m) {
        if (weights) {
            double acc = 0.0;
            for (int n = 0; n < N; ++n)
                acc += weights[n] * loss.eval(data.samples()[static_cast<size_t>(n)].label *
                                              m.value(data.samples()[static_cast<size_t>(n)].features));
            return acc;
        }
        return empirical_risk(m, data, loss);
    };

    auto rng = make_rng(derive_seed(hyper.seed, SeedTag::shuffle, 0));
    std::vector<int> order(static_cast<size_t>(N));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad(model.params.size());
    std::vector<double> step(model.params.size());

    BoundedModel best = model;
    double best_risk = risk_of(model);

    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (int start = 0; start < N; start += hyper.batch) {
            const int end = std::min(N, start + hyper.batch);
            std::fill(step.begin(), step.end(), 0.0);
            for (int b = start; b < end; ++b) {
                const Sample& s = data.samples()[static_cast<size_t>(order[static_cast<size_t>(b)])];
                double f = model.value_and_grad(s.features, grad);
                double dphi = loss.derivative(s.label * f);
                // weight 1/N by default; boosted weights scale the loss term
                double w = weights ? weights[order[static_cast<size_t>(b)]] * N : 1.0;
                double coef = w * dphi * s.label / static_cast<double>(end - start);
                for (size_t p = 0; p < grad.size(); ++p) step[p] += coef * grad[p];
            }
            for (size_t p = 0; p < model.params.size(); ++p)
                model.params[p] -= hyper.rate * step[p];
            if (hyper.norm_bound > 0.0) {
                double norm2 = 0.0;
                for (double v : model.params) norm2 += v * v;
                double norm = std::sqrt(norm2);
                if (norm > hyper.norm_bound) {
                    double scale = hyper.norm_bound / norm;
                    for (double& v : model.params) v *= scale;
                }
            }
        }
        double r = risk_of(model);
        if (!std::isfinite(r))
            throw std::runtime_error("train_erm: training diverged (non-finite risk) at epoch " +
                                     std::to_string(epoch));
        if (r < best_risk) {
            best_risk = r;
            best = model;
        }
    }

    TrainedAgent agent;
    agent.model = std::move(best);
    agent.seed = hyper.seed;
    double mean = 0.0;
    for (const auto& s : data.samples()) mean += agent.model.value(s.features);
    agent.training_mean = mean / static_cast<double>(N);

    std::ostringstream digest;
    digest << "kind=" << to_string(kind) << ";loss=" << loss.name << ";N=" << N
           << ";batch=" << hyper.batch << ";epochs=" << hyper.epochs << ";rate=" << hyper.rate
           << ";seed=" << hyper.seed << ";norm_bound=" << hyper.norm_bound;
    agent.train_config_digest = digest.str();
    return agent;
}

}  // namespace

TrainedAgent train_erm(const TrainingSet& data, const LossSpec& loss, ModelKind kind,
                       const TrainHyper& hyper, int hidden) {
    return train_impl(data, loss, kind, hyper, nullptr, hidden);
}

TrainedAgent train_erm_weighted(const TrainingSet& data, const LossSpec& loss, ModelKind kind,
                                const TrainHyper& hyper, std::span<const double> weights,
                                int hidden) {
    if (weights.size() != static_cast<size_t>(data.size()))
        throw std::invalid_argument("train_erm_weighted: weight count mismatch");
    return train_impl(data, loss, kind, hyper, weights.data(), hidden);
}

double debiased_statistic(const TrainedAgent& agent, std::span<const double> h) {
    return agent.model.value(h) - agent.training_mean;
}

}  // namespace sml
