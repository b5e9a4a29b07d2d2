#include "pigw/wick.hpp"
#include "pigw/errors.hpp"
#include "pigw/partitions.hpp"

#include <cmath>

namespace pigw {

namespace {

constexpr int kMaxNodes = 8;
constexpr int kMaxFactors = 4;

// Recursive pairing expansion. `used` marks factors already consumed.
double isserlis_rec(const double* mu, const double cov[kMaxFactors][kMaxFactors], int k, unsigned used) {
    int first = 0;
    while (first < k && (used & (1u << first))) ++first;
    if (first == k) return 1.0;
    const unsigned with_first = used | (1u << first);
    // The first free factor is either a singleton (contributes its mean) or
    // paired with a later free factor.
    double total = mu[first] * isserlis_rec(mu, cov, k, with_first);
    for (int other = first + 1; other < k; ++other) {
        if (used & (1u << other)) continue;
        total += cov[first][other] * isserlis_rec(mu, cov, k, with_first | (1u << other));
    }
    return total;
}

double isserlis_raw(const double* mu, const double cov[kMaxFactors][kMaxFactors], int k) {
    return isserlis_rec(mu, cov, k, 0u);
}

} // namespace

double isserlis(const std::vector<double>& means, const Eigen::MatrixXd& cov) {
    const int k = static_cast<int>(means.size());
    if (k > kMaxFactors) throw UnsupportedError("isserlis supports at most 4 factors");
    if (cov.rows() != k || cov.cols() != k) throw ArgumentError("isserlis covariance shape mismatch");
    double c[kMaxFactors][kMaxFactors] = {};
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) c[a][b] = cov(a, b);
    return isserlis_raw(means.data(), c, k);
}

double expected_invariant(const PatternMoments& pm, const InvariantId& graph) {
    if (graph.node_count > kMaxNodes) throw UnsupportedError("invariants with more than 8 nodes are unsupported");
    if (graph.order > kMaxFactors) throw UnsupportedError("invariants beyond quartic order are unsupported");
    const int k = graph.order;
    double total = 0.0;
    for_each_set_partition(graph.node_count, [&](const std::vector<int>& lab, int blocks) {
        const double count = falling_factorial(pm.d, blocks);
        if (count == 0.0) return;
        double mu[kMaxFactors];
        double cov[kMaxFactors][kMaxFactors];
        for (int a = 0; a < k; ++a) {
            const Edge& ea = graph.edges[a];
            mu[a] = pm.mean(lab[ea.src], lab[ea.dst]);
            for (int b = 0; b < k; ++b) {
                const Edge& eb = graph.edges[b];
                cov[a][b] = pm.covariance(lab[ea.src], lab[ea.dst], lab[eb.src], lab[eb.dst]);
            }
        }
        total += count * isserlis_raw(mu, cov, k);
    });
    return total;
}

double expected_invariant(const ModelParams& p, int id) {
    return expected_invariant(to_pattern_moments(p), invariant(id));
}

double brute_expected_invariant(const ModelParams& p, int id) {
    if (p.d > 5) throw UnsupportedError("brute-force expectation is limited to d <= 5");
    const InvariantId& g = invariant(id);
    const int d = p.d;
    const Eigen::VectorXd m = entry_mean_vector(p);
    const Eigen::MatrixXd C = entry_covariance_matrix(p);
    const int k = g.order;
    const int n = g.node_count;

    std::vector<int> idx(n, 0);
    double total = 0.0;
    while (true) {
        int entry[kMaxFactors];
        for (int a = 0; a < k; ++a) entry[a] = idx[g.edges[a].src] * d + idx[g.edges[a].dst];
        double mu[kMaxFactors];
        double cov[kMaxFactors][kMaxFactors];
        for (int a = 0; a < k; ++a) {
            mu[a] = m(entry[a]);
            for (int b = 0; b < k; ++b) cov[a][b] = C(entry[a], entry[b]);
        }
        total += isserlis_raw(mu, cov, k);
        int pos = n - 1;
        while (pos >= 0 && ++idx[pos] == d) idx[pos--] = 0;
        if (pos < 0) break;
    }
    return total;
}

McEstimate mc_expected_invariant(const ModelParams& p, int id, int n_samples, std::uint64_t seed) {
    if (n_samples < 2) throw ArgumentError("Monte Carlo estimate needs at least two samples");
    const MatrixSampler sampler(p);
    Rng rng(seed);
    double mean = 0.0, m2 = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        const double x = eval_invariant(sampler.draw(rng), id);
        const double delta = x - mean;
        mean += delta / (s + 1);
        m2 += delta * (x - mean);
    }
    const double var = m2 / (n_samples - 1);
    return {mean, std::sqrt(var / n_samples)};
}

double partition_weight_total(const InvariantId& graph, int d) {
    double total = 0.0;
    for_each_set_partition(graph.node_count, [&](const std::vector<int>&, int blocks) {
        total += falling_factorial(d, blocks);
    });
    return total;
}

} // namespace pigw
