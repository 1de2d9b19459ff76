#include "sml/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sml/rng.hpp"

namespace sml {

namespace {

constexpr int kMeanBlock = 4096;  // draws per seeded block, fixed for reproducibility

double g_of(const LossSpec& loss, double r_target, double d) {
    return d - (loss.eval(d) - r_target) / (2.0 * loss.lipschitz);
}

}  // namespace

MarginReport conditional_means(const std::vector<TrainedAgent>& agents,
                               const NetworkDataModel& model, std::span<const double> perron,
                               int M, std::uint64_t seed) {
    if (M < 1000) throw std::invalid_argument("conditional_means: M must be >= 1000");
    const int K = static_cast<int>(agents.size());
    if (model.agents() != K || static_cast<int>(perron.size()) != K)
        throw std::invalid_argument("conditional_means: K mismatch");

    MarginReport rep;
    rep.mu_plus_k.assign(static_cast<size_t>(K), 0.0);
    rep.mu_minus_k.assign(static_cast<size_t>(K), 0.0);
    rep.mu_tilde_k.assign(static_cast<size_t>(K), 0.0);
    std::vector<double> var_plus_k(static_cast<size_t>(K), 0.0), var_minus_k(static_cast<size_t>(K), 0.0);

    const int blocks = (M + kMeanBlock - 1) / kMeanBlock;
    for (int k = 0; k < K; ++k) {
        for (int cls = 0; cls < 2; ++cls) {
            const int gamma = cls == 0 ? +1 : -1;
            std::vector<double> block_sum(static_cast<size_t>(blocks), 0.0);
            std::vector<double> block_sq(static_cast<size_t>(blocks), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
            for (int b = 0; b < blocks; ++b) {
                auto rng = make_rng(derive_seed(
                    derive_seed(seed, SeedTag::means, static_cast<std::uint64_t>(k * 2 + cls)),
                    SeedTag::block, static_cast<std::uint64_t>(b)));
                const int lo = b * kMeanBlock;
                const int hi = std::min(M, lo + kMeanBlock);
                const auto& src = model.sources[static_cast<size_t>(k)];
                std::normal_distribution<double> gauss(0.0, 1.0);
                FeatureVec h(static_cast<size_t>(src.dim()));
                double s = 0.0, sq = 0.0;
                for (int i = lo; i < hi; ++i) {
                    const auto& mean = gamma == 1 ? src.mean_plus : src.mean_minus;
                    for (int j = 0; j < src.dim(); ++j)
                        h[static_cast<size_t>(j)] = mean[static_cast<size_t>(j)] +
                                                    std::sqrt(src.variances[static_cast<size_t>(j)]) * gauss(rng);
                    double f = agents[static_cast<size_t>(k)].model.value(h);
                    s += f;
                    sq += f * f;
                }
                block_sum[static_cast<size_t>(b)] = s;
                block_sq[static_cast<size_t>(b)] = sq;
            }
            double total = std::accumulate(block_sum.begin(), block_sum.end(), 0.0);
            double total_sq = std::accumulate(block_sq.begin(), block_sq.end(), 0.0);
            double mean = total / M;
            double var = std::max(0.0, total_sq / M - mean * mean);
            if (gamma == 1) {
                rep.mu_plus_k[static_cast<size_t>(k)] = mean;
                var_plus_k[static_cast<size_t>(k)] = var;
            } else {
                rep.mu_minus_k[static_cast<size_t>(k)] = mean;
                var_minus_k[static_cast<size_t>(k)] = var;
            }
        }
        rep.mu_tilde_k[static_cast<size_t>(k)] = agents[static_cast<size_t>(k)].training_mean;
    }

    double var_plus = 0.0, var_minus = 0.0;
    for (int k = 0; k < K; ++k) {
        rep.mu_plus += perron[k] * rep.mu_plus_k[static_cast<size_t>(k)];
        rep.mu_minus += perron[k] * rep.mu_minus_k[static_cast<size_t>(k)];
        rep.mu_tilde += perron[k] * rep.mu_tilde_k[static_cast<size_t>(k)];
        var_plus += perron[k] * perron[k] * var_plus_k[static_cast<size_t>(k)] / M;
        var_minus += perron[k] * perron[k] * var_minus_k[static_cast<size_t>(k)] / M;
    }
    rep.se_plus = std::sqrt(var_plus);
    rep.se_minus = std::sqrt(var_minus);
    rep.delta_plus = rep.mu_plus - rep.mu_tilde;
    rep.delta_minus = rep.mu_tilde - rep.mu_minus;
    rep.delta_achieved = std::min(rep.delta_plus, rep.delta_minus);

    rep.local_delta_plus.resize(static_cast<size_t>(K));
    rep.local_delta_minus.resize(static_cast<size_t>(K));
    rep.local_deltas.resize(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
        double dp = rep.mu_plus_k[static_cast<size_t>(k)] - rep.mu_tilde_k[static_cast<size_t>(k)];
        double dm = rep.mu_tilde_k[static_cast<size_t>(k)] - rep.mu_minus_k[static_cast<size_t>(k)];
        rep.local_delta_plus[static_cast<size_t>(k)] = dp;
        rep.local_delta_minus[static_cast<size_t>(k)] = dm;
        rep.local_deltas[static_cast<size_t>(k)] = std::min(dp, dm);
    }
    return rep;
}

double rademacher_linear_bound(double norm_bound_W, double feature_second_moment_X2, int N) {
    if (!(norm_bound_W > 0.0) || !(feature_second_moment_X2 > 0.0) || N < 1)
        throw std::invalid_argument("rademacher_linear_bound: inputs must be positive");
    return norm_bound_W * std::sqrt(feature_second_moment_X2) / std::sqrt(static_cast<double>(N));
}

FiniteClassSampler::FiniteClassSampler(std::vector<std::vector<double>> member_values)
    : member_values_(std::move(member_values)) {
    if (member_values_.empty())
        throw std::invalid_argument("FiniteClassSampler: empty class");
}

double FiniteClassSampler::sup_correlation(std::span<const int> signs,
                                           const std::vector<FeatureVec>&,
                                           std::mt19937_64&) const {
    const size_t N = signs.size();
    double best = 0.0;
    for (const auto& values : member_values_) {
        if (values.size() != N)
            throw std::invalid_argument("FiniteClassSampler: member values size mismatch");
        double s = 0.0;
        for (size_t n = 0; n < N; ++n) s += signs[n] * values[n];
        best = std::max(best, std::abs(s) / static_cast<double>(N));
    }
    return best;
}

ModelClassSampler::ModelClassSampler(ModelKind kind, int dim, int hidden, double beta,
                                     double norm_bound, std::vector<std::vector<double>> init_params,
                                     int restarts, int ascent_steps, double step)
    : kind_(kind),
      dim_(dim),
      hidden_(hidden),
      beta_(beta),
      norm_bound_(norm_bound),
      inits_(std::move(init_params)),
      restarts_(restarts),
      ascent_steps_(ascent_steps),
      step_(step) {
    if (kind_ == ModelKind::oracle_llr)
        throw std::invalid_argument("ModelClassSampler: oracle class has a single member");
}

double ModelClassSampler::sup_correlation(std::span<const int> signs,
                                          const std::vector<FeatureVec>& data,
                                          std::mt19937_64& rng) const {
    const int N = static_cast<int>(data.size());
    if (static_cast<int>(signs.size()) != N)
        throw std::invalid_argument("ModelClassSampler: signs/data size mismatch");

    auto correlation = [&](const BoundedModel& m, std::span<double> grad_out, bool want_grad) {
        double acc = 0.0;
        if (want_grad) std::fill(grad_out.begin(), grad_out.end(), 0.0);
        std::vector<double> g(m.params.size());
        for (int n = 0; n < N; ++n) {
            if (want_grad) {
                double f = m.value_and_grad(data[static_cast<size_t>(n)], g);
                acc += signs[static_cast<size_t>(n)] * f;
                for (size_t p = 0; p < g.size(); ++p)
                    grad_out[p] += signs[static_cast<size_t>(n)] * g[p];
            } else {
                acc += signs[static_cast<size_t>(n)] * m.value(data[static_cast<size_t>(n)]);
            }
        }
        return acc / N;
    };

    double best = 0.0;
    const int total_starts = static_cast<int>(inits_.size()) + restarts_;
    for (int start = 0; start < total_starts; ++start) {
        BoundedModel m = kind_ == ModelKind::linear
                             ? BoundedModel::make_linear(dim_, beta_)
                             : BoundedModel::make_mlp(dim_, hidden_, beta_, rng());
        if (start < static_cast<int>(inits_.size())) {
            if (inits_[static_cast<size_t>(start)].size() != m.params.size())
                throw std::invalid_argument("ModelClassSampler: init parameter size mismatch");
            m.params = inits_[static_cast<size_t>(start)];
        } else if (kind_ == ModelKind::linear) {
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (double& p : m.params) p = gauss(rng);
        }
        // ascend on +correlation and on -correlation; record the best |.|
        for (int direction : {+1, -1}) {
            BoundedModel cur = m;
            std::vector<double> grad(cur.params.size());
            for (int it = 0; it < ascent_steps_; ++it) {
                correlation(cur, grad, true);
                for (size_t p = 0; p < cur.params.size(); ++p)
                    cur.params[p] += direction * step_ * grad[p];
                if (norm_bound_ > 0.0) {
                    double norm2 = 0.0;
                    for (double v : cur.params) norm2 += v * v;
                    double norm = std::sqrt(norm2);
                    if (norm > norm_bound_) {
                        double scale = norm_bound_ / norm;
                        for (double& v : cur.params) v *= scale;
                    }
                }
            }
            best = std::max(best, std::abs(correlation(cur, grad, false)));
        }
    }
    return best;
}

RademacherEstimate rademacher_empirical(const FunctionClassSampler& sampler,
                                        const std::vector<FeatureVec>& data, int draws,
                                        std::uint64_t seed) {
    if (draws < 100) throw std::invalid_argument("rademacher_empirical: draws must be >= 100");
    if (data.empty()) throw std::invalid_argument("rademacher_empirical: empty sample set");
    const int N = static_cast<int>(data.size());

    double sum = 0.0, sum_sq = 0.0;
    std::vector<int> signs(static_cast<size_t>(N));
    for (int r = 0; r < draws; ++r) {
        auto rng = make_rng(derive_seed(seed, SeedTag::rademacher, static_cast<std::uint64_t>(r)));
        for (int n = 0; n < N; ++n) signs[static_cast<size_t>(n)] = (rng() & 1ULL) ? +1 : -1;
        double v = sampler.sup_correlation(signs, data, rng);
        sum += v;
        sum_sq += v * v;
    }
    RademacherEstimate est;
    est.value = sum / draws;
    double var = std::max(0.0, sum_sq / draws - est.value * est.value);
    est.std_error = std::sqrt(var / draws);
    return est;
}

AlphaPenalty alpha_penalty(std::span<const long long> sample_counts,
                           std::span<const double> perron) {
    if (sample_counts.empty() || sample_counts.size() != perron.size())
        throw std::invalid_argument("alpha_penalty: size mismatch");
    AlphaPenalty out;
    for (long long n : sample_counts) {
        if (n < 1) throw std::invalid_argument("alpha_penalty: counts must be >= 1");
        out.n_max = std::max(out.n_max, n);
    }
    double alpha = 0.0;
    for (size_t k = 0; k < sample_counts.size(); ++k)
        alpha += perron[k] * static_cast<double>(out.n_max) / static_cast<double>(sample_counts[k]);
    out.alpha = alpha;
    return out;
}

double solve_d_star(const LossSpec& loss, double R_target, double delta) {
    if (!(R_target < loss.phi_at_0))
        throw std::invalid_argument("solve_d_star: target risk must be strictly below phi(0)");
    if (delta < 0.0) throw std::invalid_argument("solve_d_star: delta must be >= 0");
    const double dmax = delta_max(loss, R_target);
    if (delta >= dmax)
        throw std::domain_error("solve_d_star: margin too large (delta_max = " +
                                std::to_string(dmax) + ")");

    // g is strictly increasing with slope >= 1, g(0) < 0 <= delta
    double lo = 0.0, hi = 1.0;
    while (g_of(loss, R_target, hi) < delta) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (g_of(loss, R_target, mid) < delta)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
    }
    double d = 0.5 * (lo + hi);
    return d;
}

double delta_max(const LossSpec& loss, double R_target) {
    if (!(R_target < loss.phi_at_0))
        throw std::invalid_argument("delta_max: target risk must be strictly below phi(0)");
    // d_R = inf{x : phi(x) = R_target} located by bisection on phi(x) > R_target
    // (phi is continuous and non-increasing, so the predicate is monotone).
    double hi = 1.0;
    while (loss.eval(hi) > R_target && hi < 1e12) hi *= 2.0;
    if (loss.eval(hi) > R_target)
        return std::numeric_limits<double>::infinity();  // phi never attains R_target
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (loss.eval(mid) > R_target)
            lo = mid;
        else
            hi = mid;
    }
    double d_R = 0.5 * (lo + hi);
    // delta_max = g(d_R): the margins for which d*_delta stays below d_R
    return g_of(loss, R_target, d_R);
}

double energy(const LossSpec& loss, double R_target, double delta) {
    return (solve_d_star(loss, R_target, delta) - delta) / 4.0;
}

BoundValue consistency_bound(const BoundInputs& inputs, const LossSpec& loss, double delta) {
    if (inputs.n_max < 1) throw std::invalid_argument("consistency_bound: N_max must be >= 1");
    double E = energy(loss, inputs.r_target, delta);
    BoundValue out;
    if (!(inputs.rho < E)) {
        out.value = 0.0;
        out.vacuous = true;
        return out;
    }
    double gap = E - inputs.rho;
    double exponent = 8.0 * static_cast<double>(inputs.n_max) * gap * gap /
                      (inputs.alpha * inputs.alpha * inputs.beta * inputs.beta);
    out.value = std::clamp(1.0 - 2.0 * std::exp(-exponent), 0.0, 1.0);
    out.vacuous = out.value == 0.0;
    return out;
}

double kappa(double beta, int K, double sigma) {
    if (K < 1) throw std::invalid_argument("kappa: K must be >= 1");
    if (!(sigma < 1.0)) throw std::invalid_argument("kappa: sigma must be < 1");
    return 8.0 * beta * std::log(static_cast<double>(K)) / (1.0 - sigma);
}

BoundValue theorem1_bound(const BoundInputs& inputs, const LossSpec& loss, double delta,
                          double kappa_value, double S) {
    if (!(delta > 0.0)) throw std::domain_error("theorem1_bound: delta must be positive");
    if (S < kappa_value / delta)
        throw std::domain_error("theorem1_bound: S below kappa/delta, bound not asserted");
    BoundValue lemma = consistency_bound(inputs, loss, delta);
    double first = lemma.vacuous ? 1.0 : 1.0 - lemma.value;  // 2 exp{...} complement term
    double dev = delta * S - kappa_value;
    double second = std::exp(-dev * dev / (2.0 * inputs.beta * inputs.beta * S));
    BoundValue out;
    out.value = std::clamp(first + second, 0.0, 1.0);
    out.vacuous = out.value >= 1.0;
    return out;
}

double sample_complexity(double delta, double beta, double kappa_value, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("sample_complexity: epsilon must lie in (0,1)");
    if (!(delta > 0.0)) throw std::invalid_argument("sample_complexity: delta must be positive");
    const double L = -std::log(epsilon);  // > 0
    return (beta * std::sqrt(beta * beta * L * L + 2.0 * kappa_value * delta * L) +
            beta * beta * L + kappa_value * delta) /
           (delta * delta);
}

BoundValue theorem2_bound(const BoundInputs& inputs, const LossSpec& loss, double delta,
                          std::span<const double> perron) {
    if (delta < 0.0) throw std::invalid_argument("theorem2_bound: delta must be >= 0");
    BoundValue lemma = consistency_bound(inputs, loss, delta);
    double first = lemma.vacuous ? 1.0 : 1.0 - lemma.value;
    double pi_sq = 0.0;
    for (double p : perron) pi_sq += p * p;
    double second = std::exp(-delta * delta / (2.0 * inputs.beta * inputs.beta * pi_sq));
    BoundValue out;
    out.value = std::clamp(first + second, 0.0, 1.0);
    out.vacuous = out.value >= 1.0;
    return out;
}

}  // namespace sml
