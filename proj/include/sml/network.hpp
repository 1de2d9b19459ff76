#pragma once
// Left-stochastic combination matrices over strongly-connected graphs and
// the spectral quantities that parameterize the error bounds.
//
// Convention: entry(l, k) = a_{lk} is the weight agent k assigns to its
// neighbor l, so every column sums to 1. All logarithms are natural.

#include <cstdint>
#include <string>
#include <vector>

namespace sml {

class CombinationMatrix {
public:
    // entries row-major, size K*K; validates nonnegativity and unit column
    // sums (tolerance 1e-12). Throws std::invalid_argument on violation.
    CombinationMatrix(int K, std::vector<double> entries);

    int size() const { return K_; }
    double entry(int l, int k) const { return entries_[static_cast<size_t>(l) * K_ + k]; }
    const std::vector<double>& entries() const { return entries_; }

    std::string to_json() const;
    static CombinationMatrix from_json(const std::string& text);

private:
    int K_;
    std::vector<double> entries_;
};

struct SpectralInfo {
    std::vector<double> perron;   // A*pi = pi, sum 1, strictly positive
    double sigma = 0.0;           // second largest-magnitude eigenvalue, in [0,1)
    double mixing_constant = 0.0; // 4*log(K)/(1-sigma)
};

// Uniform averaging rule: column k places weight 1/deg(k) on each in-neighbor
// of k (adjacency[l][k] true means l is a neighbor of k, including l == k for
// self-loops). Throws std::invalid_argument if some node has no neighbors or
// no node has a self-loop.
CombinationMatrix build_uniform_averaging(const std::vector<std::vector<bool>>& adjacency);

// True iff the directed graph of positive entries is strongly connected and
// at least one agent has a self-loop (primitivity).
bool check_strong_connectivity(const CombinationMatrix& m);

// Perron eigenvector by power iteration (L1 normalization, tolerance 1e-12,
// at most 1e5 iterations, eigen-solver fallback) and sigma from a dense
// eigendecomposition. Requires check_strong_connectivity(m).
SpectralInfo spectral_analysis(const CombinationMatrix& m);

// sum_{tau=1..t} sum_l |[A^{t-tau}]_{lk} - pi_l|; bounded by the mixing
// constant 4*log(K)/(1-sigma).
double mixing_sum(const CombinationMatrix& m, int k, int t);

}  // namespace sml
