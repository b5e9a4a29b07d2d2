#pragma once

#include "pigw/dataio.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace pigw {

constexpr int kInvariantCount = 52;

/// Directed edge u -> v standing for the factor W_{uv}. Loops (u == v) and
/// repeated edges are allowed.
struct Edge {
    int src;
    int dst;
};

/// One permutation invariant as a directed multigraph: each node is a summed
/// index, each edge one occurrence of W.
struct InvariantId {
    int index;      // 1..52
    int order;      // number of edges
    int node_count; // number of summed indices
    std::vector<Edge> edges;
};

const std::array<InvariantId, kInvariantCount>& invariant_catalogue();
const InvariantId& invariant(int index);

using InvariantVector = std::array<double, kInvariantCount>; // slot k holds I_{k+1}

double eval_invariant(const Eigen::MatrixXd& W, int index);
InvariantVector eval_all(const Eigen::MatrixXd& W);

// Literal sum over every assignment of the graph's nodes to 0..d-1.
// Costs d^node_count, so keep d small.
double naive_eval(const Eigen::MatrixXd& W, const InvariantId& graph);
double naive_eval(const Eigen::MatrixXd& W, int index);

struct InvariantStats {
    std::vector<int> ids;
    std::vector<double> mean;
    std::vector<double> std; // sample standard deviation, ddof = 1
    std::vector<double> se;  // std / sqrt(n)
    int n = 0;
};

InvariantStats ensemble_stats(const std::vector<Eigen::MatrixXd>& matrices, const std::vector<int>& ids);
InvariantStats ensemble_stats(const SnapshotStore& store, int layer, int epoch, const std::vector<int>& ids);

std::vector<int> invariant_range(int first, int last);

} // namespace pigw
