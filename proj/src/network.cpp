#include "sml/network.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <queue>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sml {

namespace {

constexpr double kColumnSumTol = 1e-12;

std::vector<double> matvec(const CombinationMatrix& m, const std::vector<double>& x) {
    const int K = m.size();
    std::vector<double> y(K, 0.0);
    for (int l = 0; l < K; ++l)
        for (int k = 0; k < K; ++k) y[l] += m.entry(l, k) * x[k];
    return y;
}

bool reaches_all(const CombinationMatrix& m, bool reverse) {
    const int K = m.size();
    std::vector<char> seen(K, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v = 0; v < K; ++v) {
            // edge u->v when a_{uv} > 0 (information flows from u to v)
            double w = reverse ? m.entry(v, u) : m.entry(u, v);
            if (w > 0.0 && !seen[v]) {
                seen[v] = 1;
                ++count;
                q.push(v);
            }
        }
    }
    return count == K;
}

}  // namespace

CombinationMatrix::CombinationMatrix(int K, std::vector<double> entries)
    : K_(K), entries_(std::move(entries)) {
    if (K_ <= 0) throw std::invalid_argument("CombinationMatrix: K must be positive");
    if (entries_.size() != static_cast<size_t>(K_) * K_)
        throw std::invalid_argument("CombinationMatrix: entries must have K*K elements");
    for (int k = 0; k < K_; ++k) {
        double col = 0.0;
        for (int l = 0; l < K_; ++l) {
            double a = entry(l, k);
            if (a < 0.0) throw std::invalid_argument("CombinationMatrix: negative entry");
            col += a;
        }
        if (std::abs(col - 1.0) > kColumnSumTol)
            throw std::invalid_argument("CombinationMatrix: column " + std::to_string(k) +
                                        " does not sum to 1");
    }
}

std::string CombinationMatrix::to_json() const {
    nlohmann::json j;
    j["K"] = K_;
    j["entries"] = entries_;
    return j.dump();
}

CombinationMatrix CombinationMatrix::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    return CombinationMatrix(j.at("K").get<int>(), j.at("entries").get<std::vector<double>>());
}

CombinationMatrix build_uniform_averaging(const std::vector<std::vector<bool>>& adjacency) {
    const int K = static_cast<int>(adjacency.size());
    if (K == 0) throw std::invalid_argument("build_uniform_averaging: empty adjacency");
    for (const auto& row : adjacency)
        if (static_cast<int>(row.size()) != K)
            throw std::invalid_argument("build_uniform_averaging: adjacency must be square");

    bool any_self_loop = false;
    std::vector<double> entries(static_cast<size_t>(K) * K, 0.0);
    for (int k = 0; k < K; ++k) {
        int deg = 0;
        for (int l = 0; l < K; ++l)
            if (adjacency[l][k]) ++deg;
        if (deg == 0)
            throw std::invalid_argument("build_uniform_averaging: node " + std::to_string(k) +
                                        " has an empty neighborhood");
        if (adjacency[k][k]) any_self_loop = true;
        for (int l = 0; l < K; ++l)
            if (adjacency[l][k]) entries[static_cast<size_t>(l) * K + k] = 1.0 / deg;
    }
    if (!any_self_loop)
        throw std::invalid_argument("build_uniform_averaging: no self-loop in the graph");
    return CombinationMatrix(K, std::move(entries));
}

bool check_strong_connectivity(const CombinationMatrix& m) {
    const int K = m.size();
    bool self_loop = false;
    for (int k = 0; k < K; ++k)
        if (m.entry(k, k) > 0.0) self_loop = true;
    if (!self_loop) return false;
    return reaches_all(m, false) && reaches_all(m, true);
}

SpectralInfo spectral_analysis(const CombinationMatrix& m) {
    if (!check_strong_connectivity(m))
        throw std::invalid_argument("spectral_analysis: matrix is not primitive "
                                    "(strong connectivity with a self-loop required)");
    const int K = m.size();
    SpectralInfo info;

    // Perron vector by power iteration with L1 normalization.
    std::vector<double> x(K, 1.0 / K);
    bool converged = false;
    for (int it = 0; it < 100000; ++it) {
        std::vector<double> y = matvec(m, x);
        double s = 0.0;
        for (double v : y) s += v;
        for (double& v : y) v /= s;
        double diff = 0.0;
        for (int i = 0; i < K; ++i) diff += std::abs(y[i] - x[i]);
        x = std::move(y);
        if (diff < 1e-12) {
            converged = true;
            break;
        }
    }

    Eigen::MatrixXd A(K, K);
    for (int l = 0; l < K; ++l)
        for (int k = 0; k < K; ++k) A(l, k) = m.entry(l, k);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(A);
    const auto& lambda = solver.eigenvalues();

    int perron_index = 0;
    double best = std::abs(lambda(0) - std::complex<double>(1.0, 0.0));
    for (int i = 1; i < K; ++i) {
        double d = std::abs(lambda(i) - std::complex<double>(1.0, 0.0));
        if (d < best) {
            best = d;
            perron_index = i;
        }
    }

    if (!converged) {
        // fall back to the eigenvector of the eigenvalue closest to 1
        Eigen::VectorXcd v = solver.eigenvectors().col(perron_index);
        double s = 0.0;
        for (int i = 0; i < K; ++i) s += v(i).real();
        for (int i = 0; i < K; ++i) x[static_cast<size_t>(i)] = v(i).real() / s;
    }

    double sigma = 0.0;
    for (int i = 0; i < K; ++i) {
        if (i == perron_index) continue;
        sigma = std::max(sigma, std::abs(lambda(i)));
    }
    if (sigma >= 1.0)
        throw std::invalid_argument("spectral_analysis: second eigenvalue magnitude is not < 1");

    info.perron = std::move(x);
    info.sigma = sigma;
    info.mixing_constant = 4.0 * std::log(static_cast<double>(K)) / (1.0 - sigma);
    return info;
}

double mixing_sum(const CombinationMatrix& m, int k, int t) {
    const int K = m.size();
    if (k < 0 || k >= K) throw std::invalid_argument("mixing_sum: agent index out of range");
    if (t < 1) throw std::invalid_argument("mixing_sum: horizon must be >= 1");
    const std::vector<double> pi = spectral_analysis(m).perron;

    // column k of A^p for p = 0..t-1, built incrementally
    std::vector<double> col(K, 0.0);
    col[k] = 1.0;  // A^0 = I
    double total = 0.0;
    for (int p = 0; p < t; ++p) {
        for (int l = 0; l < K; ++l) total += std::abs(col[l] - pi[l]);
        if (p + 1 < t) col = matvec(m, col);
    }
    return total;
}

}  // namespace sml
