#include "sml/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sml/csv.hpp"
#include "sml/parallel.hpp"
#include "sml/rng.hpp"

namespace sml {

namespace {

constexpr int kRunBlock = 256;  // runs per cell; fixed so results never depend on threads

std::uint64_t set_seed(const ExperimentConfig& cfg, int t) {
    return derive_seed(cfg.seed, SeedTag::training_set, static_cast<std::uint64_t>(t));
}

int pick_gamma(double prior, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng) < prior ? +1 : -1;
}

}  // namespace

std::vector<TrainedAgent> train_network_agents(const ExperimentConfig& cfg, int t) {
    std::vector<int> n(cfg.n_per_agent.begin(), cfg.n_per_agent.end());
    return train_network_agents(cfg, t, n);
}

std::vector<TrainedAgent> train_network_agents(const ExperimentConfig& cfg, int t,
                                               const std::vector<int>& n_per_agent) {
    const int K = cfg.agents();
    if (static_cast<int>(n_per_agent.size()) != K)
        throw std::invalid_argument("train_network_agents: n_per_agent size mismatch");
    const std::uint64_t ts = set_seed(cfg, t);
    std::vector<TrainedAgent> agents;
    agents.reserve(static_cast<size_t>(K));
    const LossSpec loss = make_loss(cfg.loss_name, cfg.beta);
    for (int k = 0; k < K; ++k) {
        const auto& source = cfg.data.sources[static_cast<size_t>(k)];
        if (cfg.model_kind == ModelKind::oracle_llr) {
            agents.push_back(make_oracle_agent(source, cfg.beta));
            continue;
        }
        std::uint64_t agent_seed = derive_seed(ts, SeedTag::agent, static_cast<std::uint64_t>(k));
        TrainingSet data = sample_training_set(source, n_per_agent[static_cast<size_t>(k)],
                                               derive_seed(agent_seed, SeedTag::stream, 0));
        TrainHyper hyper;
        hyper.beta = cfg.beta;
        hyper.batch = cfg.batch;
        hyper.epochs = cfg.epochs;
        hyper.rate = cfg.rate;
        hyper.seed = agent_seed;
        hyper.norm_bound = cfg.norm_bound;
        agents.push_back(train_erm(data, loss, cfg.model_kind, hyper, cfg.hidden));
    }
    return agents;
}

ErrorCell ErrorsResult::pooled(int k, int i) const {
    ErrorCell out;
    for (const auto& per_set : cells) {
        out.trials += per_set[static_cast<size_t>(k)][static_cast<size_t>(i)].trials;
        out.errors += per_set[static_cast<size_t>(k)][static_cast<size_t>(i)].errors;
    }
    return out;
}

double ErrorsResult::pooled_rate(int k, int i) const {
    ErrorCell c = pooled(k, i);
    return c.trials == 0 ? 0.0 : static_cast<double>(c.errors) / static_cast<double>(c.trials);
}

namespace {

// Shared sweep over (training set, run block) cells. decide(agents_t, run_rng,
// stream) fills one per-time error row (length S for SML trails, or per
// ensemble decision).
template <typename PerRun>
ErrorsResult sweep_errors(const ExperimentConfig& cfg, const std::string& strategy, int K_out,
                          const PerRun& per_run,
                          const std::vector<std::vector<TrainedAgent>>& per_set_agents) {
    const int T = cfg.training_sets;
    const int R = cfg.runs_per_set;
    const int S = cfg.stream_length;
    const int blocks = (R + kRunBlock - 1) / kRunBlock;

    ErrorsResult result;
    result.strategy = strategy;
    result.T = T;
    result.K = K_out;
    result.S = S;
    result.cells.assign(static_cast<size_t>(T),
                        std::vector<std::vector<ErrorCell>>(
                            static_cast<size_t>(K_out), std::vector<ErrorCell>(static_cast<size_t>(S))));

    // per-(t, block) local tallies, merged in index order afterwards
    std::vector<std::vector<std::vector<long long>>> local(
        static_cast<size_t>(T) * blocks,
        std::vector<std::vector<long long>>(static_cast<size_t>(K_out),
                                            std::vector<long long>(static_cast<size_t>(S), 0)));

    for_each_cell(T * blocks, cfg.threads, [&](int cell) {
        const int t = cell / blocks;
        const int b = cell % blocks;
        const int lo = b * kRunBlock;
        const int hi = std::min(R, lo + kRunBlock);
        auto& tally = local[static_cast<size_t>(cell)];
        const std::uint64_t ts = set_seed(cfg, t);
        for (int r = lo; r < hi; ++r) {
            const std::uint64_t run_seed = derive_seed(ts, SeedTag::run, static_cast<std::uint64_t>(r));
            Stream stream = sample_stream(cfg.data, cfg.true_label, S,
                                          derive_seed(run_seed, SeedTag::stream, 0));
            per_run(per_set_agents[static_cast<size_t>(t)], stream, tally);
        }
    });

    for (int t = 0; t < T; ++t) {
        for (int b = 0; b < blocks; ++b) {
            const auto& tally = local[static_cast<size_t>(t) * blocks + b];
            const int lo = b * kRunBlock;
            const int hi = std::min(R, lo + kRunBlock);
            for (int k = 0; k < K_out; ++k)
                for (int i = 0; i < S; ++i) {
                    auto& cell = result.cells[static_cast<size_t>(t)][static_cast<size_t>(k)][static_cast<size_t>(i)];
                    cell.trials += hi - lo;
                    cell.errors += tally[static_cast<size_t>(k)][static_cast<size_t>(i)];
                }
        }
    }
    return result;
}

std::vector<std::vector<TrainedAgent>> train_all_sets(const ExperimentConfig& cfg) {
    std::vector<std::vector<TrainedAgent>> per_set(static_cast<size_t>(cfg.training_sets));
    for_each_cell(cfg.training_sets, cfg.threads,
                  [&](int t) { per_set[static_cast<size_t>(t)] = train_network_agents(cfg, t); });
    return per_set;
}

}  // namespace

ErrorsResult estimate_instantaneous_error(const ExperimentConfig& cfg) {
    const int K = cfg.agents();
    auto per_set_agents = train_all_sets(cfg);
    auto per_run = [&](const std::vector<TrainedAgent>& agents, const Stream& stream,
                       std::vector<std::vector<long long>>& tally) {
        DecisionTrace trace = run_statistical_classification(agents, cfg.network, stream);
        for (int i = 0; i < cfg.stream_length; ++i)
            for (int k = 0; k < K; ++k)
                if (trace.error_at(k, i, cfg.true_label)) ++tally[static_cast<size_t>(k)][static_cast<size_t>(i)];
    };
    return sweep_errors(cfg, "sml", K, per_run, per_set_agents);
}

ErrorsResult estimate_instantaneous_error_adaboost(const ExperimentConfig& cfg) {
    if (cfg.model_kind == ModelKind::oracle_llr)
        throw std::invalid_argument("adaboost baseline requires a trainable model kind");
    const int T = cfg.training_sets;
    const int K = cfg.agents();
    const LossSpec loss = make_loss(cfg.loss_name, cfg.beta);

    std::vector<BoostEnsemble> ensembles(static_cast<size_t>(T));
    for_each_cell(T, cfg.threads, [&](int t) {
        const std::uint64_t ts = set_seed(cfg, t);
        std::vector<TrainingSet> datasets;
        datasets.reserve(static_cast<size_t>(K));
        for (int k = 0; k < K; ++k) {
            std::uint64_t agent_seed = derive_seed(ts, SeedTag::agent, static_cast<std::uint64_t>(k));
            datasets.push_back(sample_training_set(cfg.data.sources[static_cast<size_t>(k)],
                                                   cfg.n_per_agent[static_cast<size_t>(k)],
                                                   derive_seed(agent_seed, SeedTag::stream, 0)));
        }
        TrainHyper hyper;
        hyper.beta = cfg.beta;
        hyper.batch = cfg.batch;
        hyper.epochs = cfg.epochs;
        hyper.rate = cfg.rate;
        hyper.seed = ts;
        hyper.norm_bound = cfg.norm_bound;
        ensembles[static_cast<size_t>(t)] = train_adaboost(datasets, loss, cfg.model_kind, hyper, cfg.hidden);
    });

    const int R = cfg.runs_per_set;
    const int S = cfg.stream_length;
    const int blocks = (R + kRunBlock - 1) / kRunBlock;
    ErrorsResult result;
    result.strategy = "adaboost";
    result.T = T;
    result.K = 1;
    result.S = S;
    result.cells.assign(static_cast<size_t>(T),
                        std::vector<std::vector<ErrorCell>>(1, std::vector<ErrorCell>(static_cast<size_t>(S))));
    std::vector<std::vector<long long>> local(static_cast<size_t>(T) * blocks,
                                              std::vector<long long>(static_cast<size_t>(S), 0));
    for_each_cell(T * blocks, cfg.threads, [&](int cell) {
        const int t = cell / blocks;
        const int b = cell % blocks;
        const int lo = b * kRunBlock;
        const int hi = std::min(R, lo + kRunBlock);
        const std::uint64_t ts = set_seed(cfg, t);
        auto& tally = local[static_cast<size_t>(cell)];
        std::vector<FeatureVec> obs(static_cast<size_t>(K));
        for (int r = lo; r < hi; ++r) {
            const std::uint64_t run_seed = derive_seed(ts, SeedTag::run, static_cast<std::uint64_t>(r));
            Stream stream = sample_stream(cfg.data, cfg.true_label, S,
                                          derive_seed(run_seed, SeedTag::stream, 0));
            for (int i = 0; i < S; ++i) {
                for (int k = 0; k < K; ++k) obs[static_cast<size_t>(k)] = stream.obs[static_cast<size_t>(k)][static_cast<size_t>(i)];
                int vote = adaboost_predict(ensembles[static_cast<size_t>(t)], obs);
                if (vote * cfg.true_label <= 0) ++tally[static_cast<size_t>(i)];
            }
        }
    });
    for (int t = 0; t < T; ++t)
        for (int b = 0; b < blocks; ++b) {
            const int lo = b * kRunBlock;
            const int hi = std::min(R, lo + kRunBlock);
            for (int i = 0; i < S; ++i) {
                auto& cell = result.cells[static_cast<size_t>(t)][0][static_cast<size_t>(i)];
                cell.trials += hi - lo;
                cell.errors += local[static_cast<size_t>(t) * blocks + b][static_cast<size_t>(i)];
            }
        }
    return result;
}

double MarginsResult::mean_delta(int n0) const {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : rows)
        if (r.n0 == n0) {
            sum += r.delta_achieved;
            ++count;
        }
    return count == 0 ? 0.0 : sum / count;
}

double MarginsResult::se_of_mean(int n0) const {
    double mean = mean_delta(n0);
    double ss = 0.0;
    int count = 0;
    for (const auto& r : rows)
        if (r.n0 == n0) {
            ss += (r.delta_achieved - mean) * (r.delta_achieved - mean);
            ++count;
        }
    if (count < 2) return 0.0;
    return std::sqrt(ss / (count - 1) / count);
}

MarginsResult estimate_margin_vs_training_size(const ExperimentConfig& cfg,
                                               const std::vector<int>& n0_list) {
    for (size_t i = 1; i < n0_list.size(); ++i)
        if (n0_list[i] < n0_list[i - 1])
            throw std::invalid_argument("estimate_margin_vs_training_size: N0 list must be nondecreasing");
    const int T = cfg.training_sets;
    const int cells = static_cast<int>(n0_list.size()) * T;
    std::vector<MarginRow> rows(static_cast<size_t>(cells));
    const std::vector<double> perron = spectral_analysis(cfg.network).perron;

    for_each_cell(cells, cfg.threads, [&](int cell) {
        const int idx = cell / T;
        const int t = cell % T;
        const int n0 = n0_list[static_cast<size_t>(idx)];
        std::vector<int> n(static_cast<size_t>(cfg.agents()), n0);
        std::vector<TrainedAgent> agents = train_network_agents(cfg, idx * T + t, n);
        MarginReport rep = conditional_means(agents, cfg.data, perron, cfg.mean_estimation,
                                             derive_seed(set_seed(cfg, idx * T + t), SeedTag::means, 0));
        MarginRow row;
        row.n0 = n0;
        row.training_set_id = t;
        row.delta_plus = rep.delta_plus;
        row.delta_minus = rep.delta_minus;
        row.delta_achieved = rep.delta_achieved;
        row.se = rep.delta_plus < rep.delta_minus ? rep.se_plus : rep.se_minus;
        rows[static_cast<size_t>(cell)] = row;
    });

    MarginsResult result;
    result.rows = std::move(rows);
    return result;
}

ConsistencyEstimate estimate_consistency_probability(const ExperimentConfig& cfg, double delta) {
    if (cfg.training_sets < 30)
        throw std::invalid_argument("estimate_consistency_probability: need T >= 30");
    const int T = cfg.training_sets;
    const std::vector<double> perron = spectral_analysis(cfg.network).perron;
    std::vector<char> ok(static_cast<size_t>(T), 0);
    for_each_cell(T, cfg.threads, [&](int t) {
        std::vector<TrainedAgent> agents = train_network_agents(cfg, t);
        MarginReport rep = conditional_means(agents, cfg.data, perron, cfg.mean_estimation,
                                             derive_seed(set_seed(cfg, t), SeedTag::means, 0));
        ok[static_cast<size_t>(t)] = rep.delta_plus > delta && rep.delta_minus > delta;
    });
    ConsistencyEstimate est;
    est.total = T;
    est.satisfied = static_cast<int>(std::count(ok.begin(), ok.end(), 1));
    est.p_hat = static_cast<double>(est.satisfied) / T;
    est.ci_halfwidth = binomial_ci_halfwidth(est.p_hat, T);
    return est;
}

double SingleSampleResult::pooled_rate(const std::string& strategy, int n0, int agent) const {
    long long trials = 0, errors = 0;
    for (const auto& r : rows)
        if (r.strategy == strategy && r.n0 == n0 && r.agent == agent) {
            trials += r.trials;
            errors += r.errors;
        }
    return trials == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(trials);
}

long long SingleSampleResult::pooled_trials(const std::string& strategy, int n0, int agent) const {
    long long trials = 0;
    for (const auto& r : rows)
        if (r.strategy == strategy && r.n0 == n0 && r.agent == agent) trials += r.trials;
    return trials;
}

SingleSampleResult run_single_sample_experiment(const ExperimentConfig& cfg,
                                                const std::vector<int>& n0_list) {
    const int T = cfg.training_sets;
    const int K = cfg.agents();
    const int R = cfg.runs_per_set;
    const LossSpec loss = make_loss(cfg.loss_name, cfg.beta);
    const std::vector<double> perron = spectral_analysis(cfg.network).perron;
    const int cells = static_cast<int>(n0_list.size()) * T;

    struct CellTally {
        std::vector<long long> noncoop;  // per agent
        long long sml = 0;
        long long boost = 0;
    };
    std::vector<CellTally> tallies(static_cast<size_t>(cells));

    for_each_cell(cells, cfg.threads, [&](int cell) {
        const int idx = cell / T;
        const int t = cell % T;
        const int n0 = n0_list[static_cast<size_t>(idx)];
        std::vector<int> n(static_cast<size_t>(K), n0);
        const int set_index = idx * T + t;
        std::vector<TrainedAgent> agents = train_network_agents(cfg, set_index, n);

        BoostEnsemble ensemble;
        if (cfg.model_kind != ModelKind::oracle_llr) {
            const std::uint64_t ts = set_seed(cfg, set_index);
            std::vector<TrainingSet> datasets;
            for (int k = 0; k < K; ++k) {
                std::uint64_t agent_seed = derive_seed(ts, SeedTag::agent, static_cast<std::uint64_t>(k));
                datasets.push_back(sample_training_set(cfg.data.sources[static_cast<size_t>(k)], n0,
                                                       derive_seed(agent_seed, SeedTag::stream, 0)));
            }
            TrainHyper hyper;
            hyper.beta = cfg.beta;
            hyper.batch = cfg.batch;
            hyper.epochs = cfg.epochs;
            hyper.rate = cfg.rate;
            hyper.seed = ts;
            hyper.norm_bound = cfg.norm_bound;
            ensemble = train_adaboost(datasets, loss, cfg.model_kind, hyper, cfg.hidden);
        }

        CellTally tally;
        tally.noncoop.assign(static_cast<size_t>(K), 0);
        const std::uint64_t ts = set_seed(cfg, set_index);
        std::vector<FeatureVec> obs(static_cast<size_t>(K));
        for (int r = 0; r < R; ++r) {
            auto rng = make_rng(derive_seed(ts, SeedTag::run, static_cast<std::uint64_t>(r)));
            int gamma = pick_gamma(cfg.data.class_prior, rng);
            Stream stream = sample_stream(cfg.data, gamma, 1,
                                          derive_seed(derive_seed(ts, SeedTag::run, static_cast<std::uint64_t>(r)),
                                                      SeedTag::stream, 0));
            double ensemble_stat = 0.0;
            for (int k = 0; k < K; ++k) {
                obs[static_cast<size_t>(k)] = stream.obs[static_cast<size_t>(k)][0];
                double c = debiased_statistic(agents[static_cast<size_t>(k)], obs[static_cast<size_t>(k)]);
                if (gamma * c <= 0.0) ++tally.noncoop[static_cast<size_t>(k)];
                ensemble_stat += perron[static_cast<size_t>(k)] * c;
            }
            if (gamma * ensemble_stat <= 0.0) ++tally.sml;
            if (cfg.model_kind != ModelKind::oracle_llr) {
                int vote = adaboost_predict(ensemble, obs);
                if (gamma * vote <= 0) ++tally.boost;
            }
        }
        tallies[static_cast<size_t>(cell)] = std::move(tally);
    });

    SingleSampleResult result;
    for (int cell = 0; cell < cells; ++cell) {
        const int idx = cell / T;
        const int t = cell % T;
        const int n0 = n0_list[static_cast<size_t>(idx)];
        const auto& tally = tallies[static_cast<size_t>(cell)];
        for (int k = 0; k < K; ++k)
            result.rows.push_back({"noncooperative", n0, t, k, R, tally.noncoop[static_cast<size_t>(k)]});
        result.rows.push_back({"sml", n0, t, -1, R, tally.sml});
        if (cfg.model_kind != ModelKind::oracle_llr)
            result.rows.push_back({"adaboost", n0, t, -1, R, tally.boost});
    }
    return result;
}

void write_errors_csv(const std::string& path, const ErrorsResult& result) {
    CsvWriter csv(path, {"strategy", "training_set_id", "agent", "time", "trials", "errors",
                         "p_hat", "ci_lo", "ci_hi"});
    for (int t = 0; t < result.T; ++t)
        for (int k = 0; k < result.K; ++k)
            for (int i = 0; i < result.S; ++i) {
                const auto& cell = result.cells[static_cast<size_t>(t)][static_cast<size_t>(k)][static_cast<size_t>(i)];
                double p = cell.trials == 0 ? 0.0 : static_cast<double>(cell.errors) / cell.trials;
                double hw = binomial_ci_halfwidth(p, cell.trials);
                int agent_col = result.strategy == "adaboost" ? -1 : k;
                csv.row(result.strategy, static_cast<long long>(t), static_cast<long long>(agent_col),
                        static_cast<long long>(i + 1), cell.trials, cell.errors, p, p - hw, p + hw);
            }
}

void write_margins_csv(const std::string& path, const MarginsResult& result) {
    CsvWriter csv(path, {"N0", "training_set_id", "delta_plus", "delta_minus", "delta_achieved", "se"});
    for (const auto& r : result.rows)
        csv.row(static_cast<long long>(r.n0), static_cast<long long>(r.training_set_id),
                r.delta_plus, r.delta_minus, r.delta_achieved, r.se);
}

void write_single_sample_csv(const std::string& path, const SingleSampleResult& result) {
    CsvWriter csv(path, {"strategy", "N0", "training_set_id", "agent", "trials", "errors",
                         "p_hat", "ci_lo", "ci_hi"});
    for (const auto& r : result.rows) {
        double p = r.trials == 0 ? 0.0 : static_cast<double>(r.errors) / r.trials;
        double hw = binomial_ci_halfwidth(p, r.trials);
        csv.row(r.strategy, static_cast<long long>(r.n0), static_cast<long long>(r.training_set_id),
                static_cast<long long>(r.agent), r.trials, r.errors, p, p - hw, p + hw);
    }
}

BoundReport compute_bound_report(const ExperimentConfig& cfg,
                                 const std::vector<TrainedAgent>& agents) {
    const int K = cfg.agents();
    const LossSpec loss = make_loss(cfg.loss_name, cfg.beta);
    SpectralInfo spectral = spectral_analysis(cfg.network);

    BoundReport report;
    report.sigma = spectral.sigma;
    report.delta = cfg.bounds_delta;
    report.epsilon = cfg.bounds_epsilon;

    std::vector<long long> counts(cfg.n_per_agent.begin(), cfg.n_per_agent.end());
    AlphaPenalty penalty = alpha_penalty(counts, spectral.perron);
    report.alpha = penalty.alpha;
    report.n_max = penalty.n_max;

    // rho: analytic norm bound for projected linear classes, ascent estimate
    // otherwise (biased low; flagged in the JSON output).
    double rho = 0.0;
    bool rho_estimated = false;
    if (cfg.model_kind == ModelKind::linear && cfg.norm_bound > 0.0) {
        for (int k = 0; k < K; ++k) {
            const auto& src = cfg.data.sources[static_cast<size_t>(k)];
            double x2 = 1.0;  // bias coordinate
            for (int j = 0; j < src.dim(); ++j) {
                double mp = src.mean_plus[static_cast<size_t>(j)], mm = src.mean_minus[static_cast<size_t>(j)];
                x2 += 0.5 * (mp * mp + mm * mm) + src.variances[static_cast<size_t>(j)];
            }
            rho += spectral.perron[static_cast<size_t>(k)] *
                   rademacher_linear_bound(cfg.norm_bound, x2, cfg.n_per_agent[static_cast<size_t>(k)]);
        }
    } else {
        rho_estimated = true;
        for (int k = 0; k < K; ++k) {
            const auto& src = cfg.data.sources[static_cast<size_t>(k)];
            const int n = std::min(cfg.n_per_agent[static_cast<size_t>(k)], 2048);
            TrainingSet sample = sample_training_set(src, n % 2 == 0 ? n : n + 1,
                                                     derive_seed(cfg.seed, SeedTag::rademacher,
                                                                 static_cast<std::uint64_t>(k)));
            std::vector<FeatureVec> data;
            for (const auto& s : sample.samples()) data.push_back(s.features);
            std::vector<std::vector<double>> inits;
            if (agents[static_cast<size_t>(k)].model.kind == cfg.model_kind)
                inits.push_back(agents[static_cast<size_t>(k)].model.params);
            ModelClassSampler sampler(cfg.model_kind, src.dim(), cfg.hidden, cfg.beta,
                                      cfg.norm_bound, std::move(inits));
            RademacherEstimate est = rademacher_empirical(sampler, data, 128,
                                                          derive_seed(cfg.seed, SeedTag::rademacher,
                                                                      1000 + static_cast<std::uint64_t>(k)));
            rho += spectral.perron[static_cast<size_t>(k)] * est.value;
        }
    }
    report.rho = rho;
    report.rho_is_estimate = rho_estimated;

    // target risk: expected risk of the trained agents on fresh draws plus a
    // 3-sigma cushion, a conservative stand-in for the class infimum
    double r_target = 0.0, r_var = 0.0;
    const int M = 20000;
    for (int k = 0; k < K; ++k) {
        auto rng = make_rng(derive_seed(cfg.seed, SeedTag::means, 7000 + static_cast<std::uint64_t>(k)));
        const auto& src = cfg.data.sources[static_cast<size_t>(k)];
        std::normal_distribution<double> gauss(0.0, 1.0);
        double acc = 0.0, acc_sq = 0.0;
        FeatureVec h(static_cast<size_t>(src.dim()));
        for (int i = 0; i < M; ++i) {
            int gamma = (i % 2 == 0) ? +1 : -1;  // balanced training distribution
            const auto& mean = gamma == 1 ? src.mean_plus : src.mean_minus;
            for (int j = 0; j < src.dim(); ++j)
                h[static_cast<size_t>(j)] = mean[static_cast<size_t>(j)] +
                                            std::sqrt(src.variances[static_cast<size_t>(j)]) * gauss(rng);
            double v = loss.eval(gamma * agents[static_cast<size_t>(k)].model.value(h));
            acc += v;
            acc_sq += v * v;
        }
        double mean_risk = acc / M;
        double var = std::max(0.0, acc_sq / M - mean_risk * mean_risk) / M;
        r_target += spectral.perron[static_cast<size_t>(k)] * mean_risk;
        r_var += spectral.perron[static_cast<size_t>(k)] * spectral.perron[static_cast<size_t>(k)] * var;
    }
    r_target += 3.0 * std::sqrt(r_var);
    report.r_target = r_target;

    BoundInputs inputs;
    inputs.n_max = penalty.n_max;
    inputs.alpha = penalty.alpha;
    inputs.beta = cfg.beta;
    inputs.rho = rho;
    inputs.r_target = r_target;

    report.kappa = kappa(cfg.beta, K, spectral.sigma);
    report.delta_max = delta_max(loss, r_target);
    if (cfg.bounds_delta >= report.delta_max)
        throw std::domain_error("bounds: requested delta exceeds delta_max = " +
                                std::to_string(report.delta_max));
    report.d_star = solve_d_star(loss, r_target, cfg.bounds_delta);
    report.energy = (report.d_star - cfg.bounds_delta) / 4.0;

    BoundValue pc = consistency_bound(inputs, loss, cfg.bounds_delta);
    report.p_c_delta_lower = pc.value;
    report.vacuous = pc.vacuous;

    BoundValue t2 = theorem2_bound(inputs, loss, cfg.bounds_delta, spectral.perron);
    report.theorem2_bound = t2.value;
    report.theorem2_vacuous = t2.vacuous;

    report.sample_complexity =
        sample_complexity(cfg.bounds_delta, cfg.beta, report.kappa, cfg.bounds_epsilon);

    std::vector<double> s_grid = cfg.bounds_s_grid;
    if (s_grid.empty()) {
        double s0 = std::ceil(report.kappa / cfg.bounds_delta);
        for (int i = 0; i < 20; ++i) s_grid.push_back(s0 * (1.0 + 0.5 * i));
    }
    for (double S : s_grid) {
        if (S < report.kappa / cfg.bounds_delta) continue;  // below the asserted regime
        report.s_grid.push_back(S);
        report.theorem1_values.push_back(
            theorem1_bound(inputs, loss, cfg.bounds_delta, report.kappa, S).value);
    }
    return report;
}

std::string bound_report_to_json(const BoundReport& report) {
    nlohmann::json j;
    j["d_star"] = report.d_star;
    j["energy"] = report.energy;
    j["kappa"] = report.kappa;
    j["delta"] = report.delta;
    j["delta_max"] = report.delta_max;
    j["rho"] = report.rho;
    j["rho_is_estimate"] = report.rho_is_estimate;
    j["alpha"] = report.alpha;
    j["n_max"] = report.n_max;
    j["r_target"] = report.r_target;
    j["sigma"] = report.sigma;
    j["p_c_delta_lower"] = report.p_c_delta_lower;
    j["vacuous"] = report.vacuous;
    j["theorem2_bound"] = report.theorem2_bound;
    j["theorem2_vacuous"] = report.theorem2_vacuous;
    j["sample_complexity"] = report.sample_complexity;
    j["epsilon"] = report.epsilon;
    j["s_grid"] = report.s_grid;
    j["theorem1_values"] = report.theorem1_values;
    return j.dump(2);
}

void write_theorem1_csv(const std::string& path, const BoundReport& report) {
    CsvWriter csv(path, {"S", "bound"});
    for (size_t i = 0; i < report.s_grid.size(); ++i)
        csv.row(report.s_grid[i], report.theorem1_values[i]);
}

}  // namespace sml
