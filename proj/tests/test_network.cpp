#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "sml/network.hpp"
#include "test_helpers.hpp"

using namespace sml;

namespace {

std::vector<std::vector<bool>> complete_graph(int K) {
    return std::vector<std::vector<bool>>(static_cast<size_t>(K),
                                          std::vector<bool>(static_cast<size_t>(K), true));
}

std::vector<std::vector<bool>> ring_with_self_loops(int K) {
    std::vector<std::vector<bool>> adj(static_cast<size_t>(K),
                                       std::vector<bool>(static_cast<size_t>(K), false));
    for (int k = 0; k < K; ++k) {
        adj[static_cast<size_t>(k)][static_cast<size_t>(k)] = true;
        adj[static_cast<size_t>((k + 1) % K)][static_cast<size_t>(k)] = true;
    }
    return adj;
}

}  // namespace

TEST_CASE("uniform averaging on the complete 3-node graph") {
    CombinationMatrix A = build_uniform_averaging(complete_graph(3));
    for (int l = 0; l < 3; ++l)
        for (int k = 0; k < 3; ++k) CHECK(A.entry(l, k) == doctest::Approx(1.0 / 3));
}

TEST_CASE("uniform averaging on two fully-connected nodes") {
    CombinationMatrix A = build_uniform_averaging(complete_graph(2));
    CHECK(A.entry(0, 0) == 0.5);
    CHECK(A.entry(1, 0) == 0.5);
    CHECK(A.entry(0, 1) == 0.5);
    CHECK(A.entry(1, 1) == 0.5);
}

TEST_CASE("9-node ring with self-loops has two 0.5 entries per column") {
    CombinationMatrix A = build_uniform_averaging(ring_with_self_loops(9));
    for (int k = 0; k < 9; ++k) {
        int halves = 0;
        for (int l = 0; l < 9; ++l)
            if (A.entry(l, k) == 0.5) ++halves;
        CHECK(halves == 2);
    }
}

TEST_CASE("empty neighborhood is an invalid topology") {
    auto adj = complete_graph(3);
    for (int l = 0; l < 3; ++l) adj[static_cast<size_t>(l)][1] = false;
    CHECK_THROWS_AS(build_uniform_averaging(adj), std::invalid_argument);
}

TEST_CASE("strong connectivity checks") {
    CHECK(check_strong_connectivity(build_uniform_averaging(complete_graph(4))));

    // directed 2-cycle without self-loops: connected but not primitive
    CombinationMatrix cycle(2, {0.0, 1.0, 1.0, 0.0});
    CHECK_FALSE(check_strong_connectivity(cycle));

    // two disconnected self-looped pairs
    CombinationMatrix split(4, {0.5, 0.5, 0.0, 0.0,
                                0.5, 0.5, 0.0, 0.0,
                                0.0, 0.0, 0.5, 0.5,
                                0.0, 0.0, 0.5, 0.5});
    CHECK_FALSE(check_strong_connectivity(split));
}

TEST_CASE("spectral analysis of the rank-1 doubly stochastic matrix") {
    CombinationMatrix A(2, {0.5, 0.5, 0.5, 0.5});
    SpectralInfo info = spectral_analysis(A);
    CHECK(info.perron[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(info.perron[1] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(info.sigma == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("spectral analysis of the 2x2 analytic example") {
    // rows (0.5, 0.25) and (0.5, 0.75): eigenvalues {1, 0.25}, pi = (1/3, 2/3)
    CombinationMatrix A(2, {0.5, 0.25, 0.5, 0.75});
    SpectralInfo info = spectral_analysis(A);
    CHECK(info.perron[0] == doctest::Approx(1.0 / 3).epsilon(1e-10));
    CHECK(info.perron[1] == doctest::Approx(2.0 / 3).epsilon(1e-10));
    CHECK(info.sigma == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(info.mixing_constant == doctest::Approx(4.0 * std::log(2.0) / 0.75).epsilon(1e-10));
}

TEST_CASE("doubly stochastic primitive matrices have the uniform Perron vector") {
    std::mt19937_64 rng(7);
    // symmetric averaging over an undirected graph is doubly stochastic
    CombinationMatrix A(3, {0.6, 0.2, 0.2, 0.2, 0.6, 0.2, 0.2, 0.2, 0.6});
    SpectralInfo info = spectral_analysis(A);
    for (double p : info.perron) CHECK(p == doctest::Approx(1.0 / 3).epsilon(1e-10));
    (void)rng;
}

TEST_CASE("Perron residual and normalization invariants") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        int K = 2 + static_cast<int>(rng() % 5);
        CombinationMatrix A = testing::random_combination_matrix(K, rng);
        SpectralInfo info = spectral_analysis(A);
        double sum = 0.0;
        for (int l = 0; l < K; ++l) {
            double Ap = 0.0;
            for (int k = 0; k < K; ++k) Ap += A.entry(l, k) * info.perron[static_cast<size_t>(k)];
            CHECK(std::abs(Ap - info.perron[static_cast<size_t>(l)]) < 1e-10);
            CHECK(info.perron[static_cast<size_t>(l)] > 0.0);
            sum += info.perron[static_cast<size_t>(l)];
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
        CHECK(info.sigma < 1.0);
    }
}

TEST_CASE("mixing sum: rank-1 matrix contributes only the A^0 term") {
    CombinationMatrix A(2, {0.5, 0.5, 0.5, 0.5});
    for (int t : {1, 2, 5, 20})
        CHECK(mixing_sum(A, 0, t) == doctest::Approx(2.0 * (1.0 - 0.5)).epsilon(1e-10));
}

TEST_CASE("mixing sum: single agent is identically zero") {
    CombinationMatrix A(1, {1.0});
    for (int t : {1, 3, 10}) CHECK(mixing_sum(A, 0, t) == doctest::Approx(0.0));
}

TEST_CASE("mixing sum of the 2x2 example at t=3 (explicit power oracle)") {
    CombinationMatrix A(2, {0.5, 0.25, 0.5, 0.75});
    double value = mixing_sum(A, 0, 3);
    CHECK(value == doctest::Approx(1.75).epsilon(1e-10));  // frozen by explicit matrix powers
    CHECK(value <= 4.0 * std::log(2.0) / 0.75);
}

TEST_CASE("mixing bound holds exhaustively for K <= 6, t <= 50") {
    std::mt19937_64 rng(2024);
    for (int K = 1; K <= 6; ++K) {
        for (int rep = 0; rep < 4; ++rep) {
            CombinationMatrix A = testing::random_combination_matrix(K, rng);
            SpectralInfo info = spectral_analysis(A);
            for (int k = 0; k < K; ++k)
                for (int t = 1; t <= 50; ++t) {
                    INFO("K=" << K << " k=" << k << " t=" << t);
                    CHECK(mixing_sum(A, k, t) <= info.mixing_constant + 1e-9);
                }
        }
    }
}

TEST_CASE("columns of matrix powers stay stochastic") {
    std::mt19937_64 rng(5);
    CombinationMatrix A = testing::random_combination_matrix(5, rng);
    for (int m = 1; m <= 10; ++m)
        for (int k = 0; k < 5; ++k) {
            auto col = testing::mat_power_column(A, m, k);
            double sum = 0.0;
            for (double v : col) sum += v;
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("spectral analysis is invariant to agent permutation") {
    std::mt19937_64 rng(13);
    CombinationMatrix A = testing::random_combination_matrix(4, rng);
    const int perm[4] = {2, 0, 3, 1};
    std::vector<double> entries(16);
    for (int l = 0; l < 4; ++l)
        for (int k = 0; k < 4; ++k)
            entries[static_cast<size_t>(perm[l]) * 4 + perm[k]] = A.entry(l, k);
    CombinationMatrix B(4, entries);
    SpectralInfo ia = spectral_analysis(A), ib = spectral_analysis(B);
    CHECK(ia.sigma == doctest::Approx(ib.sigma).epsilon(1e-9));
    for (int k = 0; k < 4; ++k)
        CHECK(ia.perron[static_cast<size_t>(k)] ==
              doctest::Approx(ib.perron[static_cast<size_t>(perm[k])]).epsilon(1e-9));
}

TEST_CASE("combination matrix JSON round trip") {
    CombinationMatrix A(2, {0.5, 0.25, 0.5, 0.75});
    CombinationMatrix B = CombinationMatrix::from_json(A.to_json());
    CHECK(B.size() == 2);
    for (int l = 0; l < 2; ++l)
        for (int k = 0; k < 2; ++k) CHECK(B.entry(l, k) == A.entry(l, k));
}

TEST_CASE("invalid matrices are rejected") {
    CHECK_THROWS_AS(CombinationMatrix(2, {0.5, 0.5, 0.4, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(CombinationMatrix(2, {-0.1, 0.5, 1.1, 0.5}), std::invalid_argument);
    CombinationMatrix cycle(2, {0.0, 1.0, 1.0, 0.0});
    CHECK_THROWS_AS(spectral_analysis(cycle), std::invalid_argument);
}
