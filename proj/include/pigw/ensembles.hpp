#pragma once

#include "pigw/dataio.hpp"
#include "pigw/random.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace pigw {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct NetConfig {
    std::vector<int> layer_sizes{784, 10, 10, 10, 10};
    Scheme scheme = Scheme::gaussian;
    double lr = 0.01;
    int batch = 100;
    int epochs = 50;
    double l2_lambda = 0.0;
    int runs = 1;
    std::uint64_t master_seed = 0;
    std::vector<int> analyzed_layers{1, 2, 3}; // indices into the weight list

    // Hidden width alpha: 784 -> alpha -> alpha -> 10, analyzing the alpha x alpha layer.
    static NetConfig width_variant(int alpha);

    // Throws ArgumentError when a field is out of range or an analyzed layer is not square.
    void validate() const;
    int analyzed_dim() const;
};

/// Bias-free dense network. weights[l] has shape (fan_out, fan_in).
struct NetState {
    std::vector<Eigen::MatrixXd> weights;
};

struct AdamState {
    std::vector<Eigen::MatrixXd> m;
    std::vector<Eigen::MatrixXd> v;
    long step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static AdamState zeros_like(const NetState& net);
};

// gaussian: N(0, 1/fan_in); uniform: U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
Eigen::MatrixXd init_weights(Scheme scheme, int rows, int cols, int fan_in, Rng& rng);
NetState init_net(const NetConfig& config, Rng& rng);

// inputs: one example per row. Returns logits (batch x outputs); ReLU on all
// layers except the last.
Eigen::MatrixXd forward(const NetState& net, const Eigen::Ref<const RowMatrix>& inputs);

// Mean softmax cross-entropy plus l2_lambda * (sum of all squared weights).
double loss_ce(const Eigen::MatrixXd& logits, const std::vector<int>& labels, double l2_lambda, const NetState& net);

struct LossAndGrad {
    double loss = 0.0;
    std::vector<Eigen::MatrixXd> grads;
};

LossAndGrad grad(const NetState& net, const Eigen::Ref<const RowMatrix>& inputs, const std::vector<int>& labels,
                 double l2_lambda);

void adam_step(NetState& net, const std::vector<Eigen::MatrixXd>& grads, AdamState& opt, double lr);

double accuracy(const NetState& net, const ImageTensor& images, const LabelVector& labels);

struct RunResult {
    // snapshots[k][e]: analyzed layer k after epoch e (e = 0 is the initialization).
    std::vector<std::vector<Eigen::MatrixXd>> snapshots;
    std::vector<double> accuracies; // test accuracy per epoch, index 0 before training
};

std::uint64_t run_seed(std::uint64_t master_seed, int run_index);

using ProgressFn = std::function<void(int run, int epoch, double accuracy)>;

RunResult train_run(const NetConfig& config, const MnistData& data, int run_index, const ProgressFn& progress = {});

struct EnsembleResult {
    SnapshotStore store;
    std::vector<int> failed_runs; // diverged runs, excluded from the store
};

// Runs config.runs independent trainings on up to `threads` worker threads and
// assembles the store in run order.
EnsembleResult generate_ensemble(const NetConfig& config, const MnistData& data, int threads = 1,
                                 const ProgressFn& progress = {});

} // namespace pigw
