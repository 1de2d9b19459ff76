#include "sml/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace sml {

namespace {

using nlohmann::json;

CombinationMatrix parse_network(const json& j) {
    if (j.contains("adjacency")) {
        auto rows = j.at("adjacency").get<std::vector<std::vector<int>>>();
        std::vector<std::vector<bool>> adj(rows.size());
        for (size_t i = 0; i < rows.size(); ++i)
            adj[i].assign(rows[i].begin(), rows[i].end());
        return build_uniform_averaging(adj);
    }
    if (j.contains("matrix")) {
        const auto& m = j.at("matrix");
        return CombinationMatrix(m.at("K").get<int>(),
                                 m.at("entries").get<std::vector<double>>());
    }
    throw ConfigError("network: need either 'adjacency' or 'matrix'");
}

NetworkDataModel parse_data(const json& j) {
    NetworkDataModel model;
    if (j.at("kind").get<std::string>() != "gaussian")
        throw ConfigError("data.kind: only 'gaussian' is supported");
    model.class_prior = j.value("class_prior", 0.5);
    for (const auto& s : j.at("sources")) {
        GaussianSource src;
        src.mean_plus = s.at("mean_plus").get<std::vector<double>>();
        src.mean_minus = s.at("mean_minus").get<std::vector<double>>();
        src.variances = s.at("variances").get<std::vector<double>>();
        model.sources.push_back(std::move(src));
    }
    return model;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    ExperimentConfig cfg;
    try {
        cfg.network = parse_network(j.at("network"));
        cfg.data = parse_data(j.at("data"));

        const auto& m = j.at("model");
        cfg.model_kind = model_kind_from_string(m.at("kind").get<std::string>());
        cfg.beta = m.at("beta").get<double>();
        cfg.hidden = m.value("hidden", 15);
        cfg.norm_bound = m.value("norm_bound", 0.0);

        cfg.loss_name = j.at("loss").get<std::string>();

        const auto& tr = j.at("training");
        if (tr.contains("n_per_agent"))
            cfg.n_per_agent = tr.at("n_per_agent").get<std::vector<int>>();
        else
            cfg.n_per_agent.assign(static_cast<size_t>(cfg.network.size()), tr.at("n0").get<int>());
        cfg.batch = tr.value("batch", 10);
        cfg.epochs = tr.value("epochs", 30);
        cfg.rate = tr.value("rate", 1e-4);

        if (j.contains("prediction")) {
            const auto& p = j.at("prediction");
            cfg.stream_length = p.value("stream_length", 30);
            cfg.true_label = p.value("true_label", 1);
            cfg.consensus_tol = p.value("tol", 1e-10);
            cfg.consensus_t_max = p.value("t_max", 100000);
        }
        if (j.contains("monte_carlo")) {
            const auto& mc = j.at("monte_carlo");
            cfg.training_sets = mc.value("training_sets", 50);
            cfg.runs_per_set = mc.value("runs_per_set", 2000);
            cfg.mean_estimation = mc.value("mean_estimation", 100000);
        }
        cfg.delta_grid = j.value("delta_grid", std::vector<double>{});
        cfg.n0_list = j.value("n0_list", std::vector<int>{});
        if (j.contains("bounds")) {
            const auto& b = j.at("bounds");
            cfg.bounds_delta = b.value("delta", 0.1);
            cfg.bounds_epsilon = b.value("epsilon", 0.01);
            cfg.bounds_s_grid = b.value("s_grid", std::vector<double>{});
        }
        cfg.seed = j.value("seed", std::uint64_t{1});
        cfg.threads = j.value("threads", 0);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    // cross-section consistency
    const int K = cfg.network.size();
    if (cfg.data.agents() != K)
        throw ConfigError("config: data.sources count (" + std::to_string(cfg.data.agents()) +
                          ") must match network size (" + std::to_string(K) + ")");
    if (static_cast<int>(cfg.n_per_agent.size()) != K)
        throw ConfigError("config: training.n_per_agent must have one entry per agent");
    for (int n : cfg.n_per_agent)
        if (n < 2 || n % 2 != 0)
            throw ConfigError("config: per-agent training sizes must be even and >= 2");
    if (cfg.beta <= 0.0) throw ConfigError("config: model.beta must be positive");
    if (cfg.rate <= 0.0) throw ConfigError("config: training.rate must be positive");
    if (cfg.batch < 1 || cfg.epochs < 1)
        throw ConfigError("config: training.batch and training.epochs must be >= 1");
    if (cfg.stream_length < 1) throw ConfigError("config: prediction.stream_length must be >= 1");
    if (cfg.true_label != 1 && cfg.true_label != -1)
        throw ConfigError("config: prediction.true_label must be +1 or -1");
    if (cfg.training_sets < 1 || cfg.runs_per_set < 1 || cfg.mean_estimation < 1)
        throw ConfigError("config: monte_carlo counts must be >= 1");
    try {
        cfg.data.validate();
        (void)make_loss(cfg.loss_name, cfg.beta);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (int k = 0; k < K; ++k)
        if (cfg.model_kind == ModelKind::linear || cfg.model_kind == ModelKind::mlp)
            if (cfg.data.sources[static_cast<size_t>(k)].dim() < 1)
                throw ConfigError("config: source dimensions must be >= 1");
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

}  // namespace sml
