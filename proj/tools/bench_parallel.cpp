// Benchmark: serial reference vs OpenMP cell runner on the streaming error
// sweep. Verifies the tallies agree exactly before reporting the speedup.

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "sml/harness.hpp"
#include "sml/parallel.hpp"

using namespace sml;
using h_clock = std::chrono::high_resolution_clock;

namespace {

ExperimentConfig bench_config(int threads) {
    ExperimentConfig cfg;
    const int K = 9;
    std::vector<std::vector<bool>> adj(K, std::vector<bool>(K, false));
    for (int k = 0; k < K; ++k) {
        adj[k][k] = true;
        for (int d = 1; d <= 3; ++d) {
            adj[(k - d + K) % K][k] = true;
            adj[(k + d) % K][k] = true;
        }
    }
    cfg.network = build_uniform_averaging(adj);
    const double a[9] = {0.55, 0.30, 0.45, 0.65, 0.25, 0.50, 0.35, 0.60, 0.28};
    const double s[9] = {1.0, 1.0, 1.0, 1.2, 0.9, 1.0, 1.1, 1.0, 1.0};
    for (int k = 0; k < K; ++k) {
        GaussianSource src;
        src.mean_plus = {a[k]};
        src.mean_minus = {-a[k]};
        src.variances = {s[k] * s[k]};
        cfg.data.sources.push_back(src);
    }
    cfg.model_kind = ModelKind::linear;
    cfg.beta = 2.0;
    cfg.loss_name = "logistic";
    cfg.n_per_agent.assign(K, 400);
    cfg.batch = 10;
    cfg.epochs = 30;
    cfg.rate = 0.05;
    cfg.stream_length = 30;
    cfg.true_label = 1;
    cfg.training_sets = 10;
    cfg.runs_per_set = 2000;
    cfg.seed = 20240901;
    cfg.threads = threads;
    return cfg;
}

long long checksum(const ErrorsResult& r) {
    long long sum = 0;
    for (const auto& per_set : r.cells)
        for (const auto& per_agent : per_set)
            for (const auto& cell : per_agent) sum = sum * 1315423911LL + cell.errors;
    return sum;
}

}  // namespace

int main(int argc, char** argv) {
    int threads = argc > 1 ? std::atoi(argv[1]) : hardware_threads();

    auto t0 = h_clock::now();
    ErrorsResult serial = estimate_instantaneous_error(bench_config(1));
    auto t1 = h_clock::now();
    ErrorsResult parallel = estimate_instantaneous_error(bench_config(threads));
    auto t2 = h_clock::now();

    double serial_s = std::chrono::duration<double>(t1 - t0).count();
    double parallel_s = std::chrono::duration<double>(t2 - t1).count();

    if (checksum(serial) != checksum(parallel)) {
        std::cerr << "FAIL: serial and parallel tallies differ\n";
        return 1;
    }
    std::cout << "cells identical across schedules\n";
    std::cout << "serial reference: " << serial_s << " s\n";
    std::cout << "openmp (" << threads << " threads): " << parallel_s << " s\n";
    std::cout << "speedup: " << serial_s / parallel_s << "x\n";
    return 0;
}
