#pragma once
// Shared oracles and generators for the test suites. Everything here stays
// independent of the implementation paths it checks: matrix powers are
// formed explicitly, and the closed-form belief expansion mirrors the
// algebra rather than the recursion.

#include <cmath>
#include <random>
#include <vector>

#include "sml/network.hpp"
#include "sml/prediction.hpp"
#include "sml/training.hpp"

namespace sml::testing {

inline std::vector<double> mat_power_column(const CombinationMatrix& A, int power, int k) {
    const int K = A.size();
    std::vector<double> col(static_cast<size_t>(K), 0.0);
    col[static_cast<size_t>(k)] = 1.0;
    for (int p = 0; p < power; ++p) {
        std::vector<double> next(static_cast<size_t>(K), 0.0);
        for (int l = 0; l < K; ++l)
            for (int m = 0; m < K; ++m) next[static_cast<size_t>(l)] += A.entry(l, m) * col[static_cast<size_t>(m)];
        col = std::move(next);
    }
    return col;
}

// Closed-form belief: lambda_{k,i} = sum_{tau=1..i} sum_l [A^{i+1-tau}]_{lk} c_l(h_{l,tau}).
inline double closed_form_lambda(const std::vector<TrainedAgent>& agents,
                                 const CombinationMatrix& A, const Stream& stream, int k, int i) {
    const int K = A.size();
    double acc = 0.0;
    for (int tau = 1; tau <= i; ++tau) {
        std::vector<double> col = mat_power_column(A, i + 1 - tau, k);
        for (int l = 0; l < K; ++l)
            acc += col[static_cast<size_t>(l)] *
                   debiased_statistic(agents[static_cast<size_t>(l)],
                                      stream.obs[static_cast<size_t>(l)][static_cast<size_t>(tau - 1)]);
    }
    return acc;
}

// Random strongly-connected left-stochastic matrix (all entries positive).
inline CombinationMatrix random_combination_matrix(int K, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> entries(static_cast<size_t>(K) * K);
    for (int k = 0; k < K; ++k) {
        double col = 0.0;
        for (int l = 0; l < K; ++l) {
            double v = u(rng);
            entries[static_cast<size_t>(l) * K + k] = v;
            col += v;
        }
        for (int l = 0; l < K; ++l) entries[static_cast<size_t>(l) * K + k] /= col;
    }
    return CombinationMatrix(K, std::move(entries));
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace sml::testing
