// Command-line driver. Subcommands:
//   train            train agents and write them as JSON
//   predict-stream   run streaming classification, dump per-run traces
//   predict-single   single-sample consensus classification
//   bounds           compute the bound report (JSON + theorem-1 CSV)
//   mc-error         Monte Carlo streaming error estimation
//   margin-sweep     margins and single-sample errors over N0
//   adaboost-baseline streaming error of the boosting baseline
//   spectral         Perron vector, sigma, mixing constant
//
// Exit codes: 0 success, 2 config error, 3 numeric failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "sml/csv.hpp"
#include "sml/harness.hpp"
#include "sml/parallel.hpp"
#include "sml/rng.hpp"
#include "sml/svg.hpp"

namespace fs = std::filesystem;
using namespace sml;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = -1;
    bool svg = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config JSON")->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "master seed (overrides config)")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--threads", args.threads, "worker count (0 = OpenMP default)");
    cmd->add_flag("--svg", args.svg, "also emit SVG charts");
}

ExperimentConfig load(const CommonArgs& args) {
    ExperimentConfig cfg = ExperimentConfig::from_file(args.config_path);
    if (args.seed_set) cfg.seed = args.seed;
    if (args.threads >= 0) cfg.threads = args.threads;
    fs::create_directories(args.out_dir);
    return cfg;
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void cmd_train(const CommonArgs& args) {
    ExperimentConfig cfg = load(args);
    auto agents = train_network_agents(cfg, 0);
    for (size_t k = 0; k < agents.size(); ++k) {
        std::ofstream out(join(args.out_dir, "agent_" + std::to_string(k) + ".json"));
        out << agents[k].to_json() << "\n";
    }
    std::cout << "trained " << agents.size() << " agents -> " << args.out_dir << "\n";
}

std::vector<TrainedAgent> load_or_train(const ExperimentConfig& cfg, const std::string& agents_dir) {
    if (agents_dir.empty()) return train_network_agents(cfg, 0);
    std::vector<TrainedAgent> agents;
    for (int k = 0; k < cfg.agents(); ++k) {
        std::ifstream in(join(agents_dir, "agent_" + std::to_string(k) + ".json"));
        if (!in) throw std::runtime_error("missing agent file for agent " + std::to_string(k));
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        agents.push_back(TrainedAgent::from_json(text));
    }
    return agents;
}

void cmd_predict_stream(const CommonArgs& args, int S_override, int runs, int label_override,
                        const std::string& agents_dir) {
    ExperimentConfig cfg = load(args);
    if (S_override > 0) cfg.stream_length = S_override;
    if (label_override == 1 || label_override == -1) cfg.true_label = label_override;
    auto agents = load_or_train(cfg, agents_dir);

    CsvWriter csv(join(args.out_dir, "stream_trace.csv"), {"run", "agent", "time", "lambda", "decision"});
    for (int r = 0; r < runs; ++r) {
        Stream stream = sample_stream(cfg.data, cfg.true_label, cfg.stream_length,
                                      derive_seed(derive_seed(cfg.seed, SeedTag::run,
                                                              static_cast<std::uint64_t>(r)),
                                                  SeedTag::stream, 0));
        DecisionTrace trace = run_statistical_classification(agents, cfg.network, stream);
        for (int i = 0; i < cfg.stream_length; ++i)
            for (int k = 0; k < cfg.agents(); ++k)
                csv.row(static_cast<long long>(r), static_cast<long long>(k),
                        static_cast<long long>(i + 1),
                        trace.lambdas[static_cast<size_t>(i)][static_cast<size_t>(k)],
                        static_cast<long long>(trace.decisions[static_cast<size_t>(i)][static_cast<size_t>(k)]));
    }
    std::cout << "wrote " << join(args.out_dir, "stream_trace.csv") << "\n";
}

void cmd_predict_single(const CommonArgs& args, const std::string& agents_dir) {
    ExperimentConfig cfg = load(args);
    auto agents = load_or_train(cfg, agents_dir);
    Stream stream = sample_stream(cfg.data, cfg.true_label, 1,
                                  derive_seed(cfg.seed, SeedTag::stream, 0));
    std::vector<FeatureVec> obs;
    for (int k = 0; k < cfg.agents(); ++k) obs.push_back(stream.obs[static_cast<size_t>(k)][0]);
    ConsensusResult res =
        consensus_single_sample(agents, cfg.network, obs, cfg.consensus_tol, cfg.consensus_t_max);
    std::cout << "lambda_s=" << format_double(res.lambda_s)
              << " decision=" << static_cast<int>(res.decision) << " rounds=" << res.rounds
              << " certificate=" << format_double(res.certificate) << "\n";
}

void cmd_bounds(const CommonArgs& args, const std::string& agents_dir) {
    ExperimentConfig cfg = load(args);
    auto agents = load_or_train(cfg, agents_dir);
    BoundReport report = compute_bound_report(cfg, agents);
    std::ofstream out(join(args.out_dir, "bound_report.json"));
    out << bound_report_to_json(report) << "\n";
    write_theorem1_csv(join(args.out_dir, "theorem1_bound.csv"), report);
    std::cout << bound_report_to_json(report) << "\n";
}

void cmd_mc_error(const CommonArgs& args) {
    ExperimentConfig cfg = load(args);
    ErrorsResult result = estimate_instantaneous_error(cfg);
    write_errors_csv(join(args.out_dir, "errors.csv"), result);
    if (args.svg) {
        SvgSeries s;
        s.label = "agent 0";
        for (int i = 0; i < result.S; ++i) {
            s.x.push_back(i + 1);
            s.y.push_back(result.pooled_rate(0, i));
        }
        write_svg_lines(join(args.out_dir, "errors.svg"), "instantaneous error", {s}, true);
    }
    std::cout << "wrote " << join(args.out_dir, "errors.csv") << "\n";
}

void cmd_adaboost(const CommonArgs& args) {
    ExperimentConfig cfg = load(args);
    ErrorsResult result = estimate_instantaneous_error_adaboost(cfg);
    write_errors_csv(join(args.out_dir, "errors_adaboost.csv"), result);
    std::cout << "wrote " << join(args.out_dir, "errors_adaboost.csv") << "\n";
}

void cmd_margin_sweep(const CommonArgs& args) {
    ExperimentConfig cfg = load(args);
    std::vector<int> n0 = cfg.n0_list;
    if (n0.empty()) n0 = {cfg.n_per_agent[0]};
    MarginsResult margins = estimate_margin_vs_training_size(cfg, n0);
    write_margins_csv(join(args.out_dir, "margins.csv"), margins);
    SingleSampleResult single = run_single_sample_experiment(cfg, n0);
    write_single_sample_csv(join(args.out_dir, "single_sample.csv"), single);
    if (args.svg) {
        SvgSeries s;
        s.label = "mean achieved margin";
        for (int v : n0) {
            s.x.push_back(v);
            s.y.push_back(margins.mean_delta(v));
        }
        write_svg_lines(join(args.out_dir, "margins.svg"), "margin vs training size", {s});
    }
    std::cout << "wrote " << join(args.out_dir, "margins.csv") << " and "
              << join(args.out_dir, "single_sample.csv") << "\n";
}

void cmd_spectral(const CommonArgs& args) {
    ExperimentConfig cfg = load(args);
    SpectralInfo info = spectral_analysis(cfg.network);
    CsvWriter csv(join(args.out_dir, "spectral.csv"), {"quantity", "index", "value"});
    std::cout << "quantity,index,value\n";
    for (int k = 0; k < cfg.agents(); ++k) {
        csv.row("pi", static_cast<long long>(k), info.perron[static_cast<size_t>(k)]);
        std::cout << "pi," << k << "," << format_double(info.perron[static_cast<size_t>(k)]) << "\n";
    }
    csv.row("sigma", static_cast<long long>(-1), info.sigma);
    csv.row("mixing_constant", static_cast<long long>(-1), info.mixing_constant);
    std::cout << "sigma,-1," << format_double(info.sigma) << "\n";
    std::cout << "mixing_constant,-1," << format_double(info.mixing_constant) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"social machine learning simulator and bounds calculator"};
    app.require_subcommand(1);

    CommonArgs args;
    int S_override = 0, runs = 1, label_override = 0;
    std::string agents_dir;

    auto* train = app.add_subcommand("train", "train agents from the config");
    add_common(train, args);

    auto* stream = app.add_subcommand("predict-stream", "streaming classification traces");
    add_common(stream, args);
    stream->add_option("--S", S_override, "stream length override");
    stream->add_option("--runs", runs, "number of runs to trace");
    stream->add_option("--true-label", label_override, "true label (+1/-1) override");
    stream->add_option("--agents", agents_dir, "directory of trained agent JSON files");

    auto* single = app.add_subcommand("predict-single", "single-sample consensus");
    add_common(single, args);
    single->add_option("--agents", agents_dir, "directory of trained agent JSON files");

    auto* bounds = app.add_subcommand("bounds", "bound report");
    add_common(bounds, args);
    bounds->add_option("--agents", agents_dir, "directory of trained agent JSON files");

    auto* mc = app.add_subcommand("mc-error", "Monte Carlo streaming error");
    add_common(mc, args);

    auto* sweep = app.add_subcommand("margin-sweep", "margins and single-sample errors over N0");
    add_common(sweep, args);

    auto* boost = app.add_subcommand("adaboost-baseline", "boosting baseline streaming error");
    add_common(boost, args);

    auto* spectral = app.add_subcommand("spectral", "Perron vector and spectral gap");
    add_common(spectral, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) cmd_train(args);
        if (stream->parsed()) cmd_predict_stream(args, S_override, runs, label_override, agents_dir);
        if (single->parsed()) cmd_predict_single(args, agents_dir);
        if (bounds->parsed()) cmd_bounds(args, agents_dir);
        if (mc->parsed()) cmd_mc_error(args);
        if (sweep->parsed()) cmd_margin_sweep(args);
        if (boost->parsed()) cmd_adaboost(args);
        if (spectral->parsed()) cmd_spectral(args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
