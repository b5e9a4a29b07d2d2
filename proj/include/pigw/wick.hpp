#pragma once

#include "pigw/invariants.hpp"
#include "pigw/pigmm.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace pigw {

// E[x_1 ... x_k] for jointly Gaussian x with the given means and covariance:
// sum over partial pairings of covariance products times means of the
// unpaired factors. k <= 4.
double isserlis(const std::vector<double>& means, const Eigen::MatrixXd& cov);

// Exact expectation of invariant `id` under the model, summing over set
// partitions of the graph's nodes. Each partition contributes the number of
// injective index labellings times the Isserlis moment of its edge entries.
double expected_invariant(const ModelParams& p, int id);
double expected_invariant(const PatternMoments& pm, const InvariantId& graph);

// Independent check: literal sum over all d^node_count index tuples using the
// dense entry mean and covariance. Refuses d > 5.
double brute_expected_invariant(const ModelParams& p, int id);

struct McEstimate {
    double mean = 0.0;
    double se = 0.0;
};

McEstimate mc_expected_invariant(const ModelParams& p, int id, int n_samples, std::uint64_t seed);

// Sum over partitions of the falling-factorial weights; equals d^node_count.
double partition_weight_total(const InvariantId& graph, int d);

} // namespace pigw
