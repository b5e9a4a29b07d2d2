#include "pigw/ensembles.hpp"
#include "pigw/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>

namespace pigw {

NetConfig NetConfig::width_variant(int alpha) {
    NetConfig c;
    c.layer_sizes = {784, alpha, alpha, 10};
    c.analyzed_layers = {1};
    return c;
}

void NetConfig::validate() const {
    if (layer_sizes.size() < 2) throw ArgumentError("network needs at least one weight layer");
    for (int s : layer_sizes)
        if (s < 1) throw ArgumentError("layer sizes must be positive");
    if (!(lr > 0.0)) throw ArgumentError("learning rate must be positive");
    if (batch < 1) throw ArgumentError("batch size must be at least 1");
    if (epochs < 0) throw ArgumentError("epochs must be non-negative");
    if (l2_lambda < 0.0) throw ArgumentError("l2_lambda must be non-negative");
    if (runs < 0) throw ArgumentError("runs must be non-negative");
    const int n_weights = static_cast<int>(layer_sizes.size()) - 1;
    for (int l : analyzed_layers) {
        if (l < 0 || l >= n_weights) throw ArgumentError("analyzed layer index out of range");
        if (layer_sizes[l] != layer_sizes[l + 1]) throw ArgumentError("analyzed layers must be square");
    }
    if (!analyzed_layers.empty()) {
        const int d = layer_sizes[analyzed_layers.front()];
        for (int l : analyzed_layers)
            if (layer_sizes[l] != d) throw ArgumentError("analyzed layers must share one dimension");
    }
}

int NetConfig::analyzed_dim() const { return analyzed_layers.empty() ? 0 : layer_sizes[analyzed_layers.front()]; }

AdamState AdamState::zeros_like(const NetState& net) {
    AdamState s;
    for (const auto& w : net.weights) {
        s.m.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
        s.v.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    return s;
}

Eigen::MatrixXd init_weights(Scheme scheme, int rows, int cols, int fan_in, Rng& rng) {
    if (rows < 1 || cols < 1 || fan_in < 1) throw ArgumentError("init_weights needs positive dimensions");
    Eigen::MatrixXd W(rows, cols);
    const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
    if (scheme == Scheme::gaussian) {
        std::normal_distribution<double> dist(0.0, scale);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) W(i, j) = dist(rng);
    } else {
        std::uniform_real_distribution<double> dist(-scale, scale);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) W(i, j) = dist(rng);
    }
    return W;
}

NetState init_net(const NetConfig& config, Rng& rng) {
    NetState net;
    for (std::size_t l = 0; l + 1 < config.layer_sizes.size(); ++l) {
        const int fan_in = config.layer_sizes[l];
        const int fan_out = config.layer_sizes[l + 1];
        net.weights.push_back(init_weights(config.scheme, fan_out, fan_in, fan_in, rng));
    }
    return net;
}

Eigen::MatrixXd forward(const NetState& net, const Eigen::Ref<const RowMatrix>& inputs) {
    if (net.weights.empty()) throw ArgumentError("empty network");
    if (inputs.cols() != net.weights.front().cols()) throw ArgumentError("input width does not match first layer");
    Eigen::MatrixXd a = inputs * net.weights[0].transpose();
    for (std::size_t l = 1; l < net.weights.size(); ++l) {
        if (net.weights[l].cols() != a.cols()) throw ArgumentError("layer shapes do not chain");
        a = a.cwiseMax(0.0) * net.weights[l].transpose();
    }
    return a;
}

namespace {

double l2_sum(const NetState& net) {
    double s = 0.0;
    for (const auto& w : net.weights) s += w.squaredNorm();
    return s;
}

void check_labels(const Eigen::MatrixXd& logits, const std::vector<int>& labels) {
    if (static_cast<std::size_t>(logits.rows()) != labels.size()) throw ArgumentError("logits rows != label count");
    for (int y : labels)
        if (y < 0 || y >= logits.cols()) throw ArgumentError("label outside logit range");
}

} // namespace

double loss_ce(const Eigen::MatrixXd& logits, const std::vector<int>& labels, double l2_lambda, const NetState& net) {
    check_labels(logits, labels);
    if (logits.hasNaN()) throw NumericError("NaN logits");
    double total = 0.0;
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
        const double mx = logits.row(r).maxCoeff();
        const double lse = mx + std::log((logits.row(r).array() - mx).exp().sum());
        total += lse - logits(r, labels[r]);
    }
    double loss = total / static_cast<double>(logits.rows());
    if (l2_lambda != 0.0) loss += l2_lambda * l2_sum(net);
    return loss;
}

LossAndGrad grad(const NetState& net, const Eigen::Ref<const RowMatrix>& inputs, const std::vector<int>& labels,
                 double l2_lambda) {
    const std::size_t L = net.weights.size();
    if (L == 0) throw ArgumentError("empty network");
    if (inputs.cols() != net.weights.front().cols()) throw ArgumentError("input width does not match first layer");

    // acts[l] is the input to weight layer l (post-ReLU for l > 0).
    std::vector<Eigen::MatrixXd> acts(L);
    acts[0] = inputs;
    Eigen::MatrixXd z = inputs * net.weights[0].transpose();
    for (std::size_t l = 1; l < L; ++l) {
        acts[l] = z.cwiseMax(0.0);
        z = acts[l] * net.weights[l].transpose();
    }
    const Eigen::MatrixXd& logits = z;
    check_labels(logits, labels);
    if (!logits.allFinite()) throw NumericError("non-finite logits");

    const double B = static_cast<double>(logits.rows());
    Eigen::MatrixXd delta(logits.rows(), logits.cols());
    double total = 0.0;
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
        const double mx = logits.row(r).maxCoeff();
        const Eigen::ArrayXd e = (logits.row(r).array() - mx).exp().transpose();
        const double se = e.sum();
        total += mx + std::log(se) - logits(r, labels[r]);
        delta.row(r) = (e / se).matrix().transpose();
        delta(r, labels[r]) -= 1.0;
    }
    delta /= B;

    LossAndGrad out;
    out.loss = total / B + (l2_lambda != 0.0 ? l2_lambda * l2_sum(net) : 0.0);
    out.grads.resize(L);
    for (std::size_t l = L; l-- > 0;) {
        out.grads[l] = delta.transpose() * acts[l];
        if (l2_lambda != 0.0) out.grads[l] += 2.0 * l2_lambda * net.weights[l];
        if (l > 0) delta = ((delta * net.weights[l]).array() * (acts[l].array() > 0.0).cast<double>()).matrix();
    }
    return out;
}

void adam_step(NetState& net, const std::vector<Eigen::MatrixXd>& grads, AdamState& opt, double lr) {
    if (grads.size() != net.weights.size() || opt.m.size() != net.weights.size())
        throw ArgumentError("adam_step shape mismatch");
    ++opt.step;
    const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
    const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        if (grads[l].rows() != net.weights[l].rows() || grads[l].cols() != net.weights[l].cols())
            throw ArgumentError("adam_step gradient shape mismatch");
        opt.m[l] = opt.beta1 * opt.m[l] + (1.0 - opt.beta1) * grads[l];
        opt.v[l] = opt.beta2 * opt.v[l] + (1.0 - opt.beta2) * grads[l].cwiseAbs2();
        const auto m_hat = opt.m[l].array() / bc1;
        const auto v_hat = opt.v[l].array() / bc2;
        net.weights[l].array() -= lr * m_hat / (v_hat.sqrt() + opt.eps);
    }
}

double accuracy(const NetState& net, const ImageTensor& images, const LabelVector& labels) {
    if (images.count != labels.count()) throw ArgumentError("image and label counts differ");
    if (images.count == 0) return 0.0;
    const Eigen::Index dim = static_cast<Eigen::Index>(images.image_size());
    constexpr std::size_t chunk = 1000;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < images.count; start += chunk) {
        const std::size_t n = std::min(chunk, images.count - start);
        Eigen::Map<const RowMatrix> x(images.pixels.data() + start * dim, static_cast<Eigen::Index>(n), dim);
        const Eigen::MatrixXd logits = forward(net, x);
        for (std::size_t r = 0; r < n; ++r) {
            Eigen::Index arg;
            logits.row(static_cast<Eigen::Index>(r)).maxCoeff(&arg);
            if (arg == labels.labels[start + r]) ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(images.count);
}

std::uint64_t run_seed(std::uint64_t master_seed, int run_index) {
    return derive_seed(master_seed, static_cast<std::uint64_t>(run_index));
}

RunResult train_run(const NetConfig& config, const MnistData& data, int run_index, const ProgressFn& progress) {
    config.validate();
    const auto& X = data.train_images;
    const auto& Y = data.train_labels;
    if (X.count != Y.count()) throw ArgumentError("training image and label counts differ");
    if (static_cast<int>(X.image_size()) != config.layer_sizes.front())
        throw ArgumentError("image size does not match the input layer");

    Rng rng(run_seed(config.master_seed, run_index));
    NetState net = init_net(config, rng);
    AdamState opt = AdamState::zeros_like(net);

    RunResult out;
    out.snapshots.resize(config.analyzed_layers.size());
    auto snapshot = [&] {
        for (std::size_t k = 0; k < config.analyzed_layers.size(); ++k)
            out.snapshots[k].push_back(net.weights[config.analyzed_layers[k]]);
        out.accuracies.push_back(accuracy(net, data.test_images, data.test_labels));
    };
    snapshot();
    if (progress) progress(run_index, 0, out.accuracies.back());

    const Eigen::Index dim = static_cast<Eigen::Index>(X.image_size());
    std::vector<std::size_t> order(X.count);
    RowMatrix xb;
    std::vector<int> yb;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += config.batch) {
            const std::size_t n = std::min<std::size_t>(config.batch, order.size() - start);
            xb.resize(static_cast<Eigen::Index>(n), dim);
            yb.resize(n);
            for (std::size_t r = 0; r < n; ++r) {
                const std::size_t idx = order[start + r];
                xb.row(static_cast<Eigen::Index>(r)) =
                    Eigen::Map<const Eigen::RowVectorXd>(X.pixels.data() + idx * dim, dim);
                yb[r] = Y.labels[idx];
            }
            LossAndGrad lg;
            try {
                lg = grad(net, xb, yb, config.l2_lambda);
            } catch (const NumericError& e) {
                throw RunError(run_index, std::string("diverged in epoch ") + std::to_string(epoch) + ": " + e.what());
            }
            if (!std::isfinite(lg.loss))
                throw RunError(run_index, "non-finite loss in epoch " + std::to_string(epoch));
            adam_step(net, lg.grads, opt, config.lr);
        }
        snapshot();
        if (progress) progress(run_index, epoch, out.accuracies.back());
    }
    return out;
}

EnsembleResult generate_ensemble(const NetConfig& config, const MnistData& data, int threads,
                                 const ProgressFn& progress) {
    config.validate();
    std::vector<std::optional<RunResult>> results(config.runs);
    std::vector<int> failed;
    std::mutex mu;
    std::atomic<int> next{0};

    auto worker = [&] {
        for (int r = next++; r < config.runs; r = next++) {
            try {
                RunResult res = train_run(config, data, r, progress);
                std::lock_guard<std::mutex> lock(mu);
                results[r] = std::move(res);
            } catch (const RunError&) {
                std::lock_guard<std::mutex> lock(mu);
                failed.push_back(r);
            }
        }
    };
    const int n_threads = std::max(1, std::min(threads, config.runs));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::sort(failed.begin(), failed.end());

    EnsembleResult out;
    SnapshotStore& s = out.store;
    s.scheme = config.scheme;
    s.regularized = config.l2_lambda > 0.0;
    s.d = config.analyzed_dim();
    s.layer_count = static_cast<int>(config.analyzed_layers.size());
    s.epochs = config.epochs;
    s.master_seed = config.master_seed;
    for (int r = 0; r < config.runs; ++r) {
        if (!results[r]) continue;
        for (int k = 0; k < s.layer_count; ++k)
            for (int e = 0; e <= s.epochs; ++e) s.matrices.push_back(results[r]->snapshots[k][e]);
        s.accuracies.push_back(results[r]->accuracies);
        ++s.runs;
    }
    out.failed_runs = failed;
    return out;
}

} // namespace pigw
