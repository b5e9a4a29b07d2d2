#include "pigw/ensembles.hpp"
#include "pigw/errors.hpp"
#include "synthetic.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace pigw;
using pigw::testing::synthetic_mnist;

namespace {

NetConfig small_config() {
    NetConfig c;
    c.epochs = 2;
    c.runs = 3;
    c.master_seed = 17;
    return c;
}

RowMatrix random_batch(int n, int dim, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RowMatrix x(n, dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < dim; ++j) x(i, j) = u(rng);
    return x;
}

} // namespace

TEST_CASE("initial weight distributions") {
    Rng rng(1);
    const Eigen::MatrixXd g = init_weights(Scheme::gaussian, 200, 200, 50, rng);
    const double var_g = g.squaredNorm() / g.size();
    CHECK(var_g == doctest::Approx(1.0 / 50).epsilon(0.03));
    const Eigen::MatrixXd u = init_weights(Scheme::uniform, 200, 200, 25, rng);
    CHECK(u.cwiseAbs().maxCoeff() <= 0.2);
    CHECK(u.squaredNorm() / u.size() == doctest::Approx(0.04 / 3).epsilon(0.03));

    NetState net = init_net(NetConfig{}, rng);
    REQUIRE(net.weights.size() == 4);
    CHECK(net.weights[0].rows() == 10);
    CHECK(net.weights[0].cols() == 784);
    CHECK(net.weights[3].rows() == 10);
}

TEST_CASE("loss matches a direct evaluation") {
    Eigen::MatrixXd logits(2, 3);
    logits << 1.0, 2.0, 3.0, 0.5, -1.0, 0.0;
    NetState net;
    net.weights.push_back(Eigen::MatrixXd::Constant(2, 2, 0.5));
    const double l0 = -std::log(std::exp(3.0) / (std::exp(1.0) + std::exp(2.0) + std::exp(3.0)));
    const double l1 = -std::log(std::exp(0.5) / (std::exp(0.5) + std::exp(-1.0) + 1.0));
    CHECK(loss_ce(logits, {2, 0}, 0.0, net) == doctest::Approx((l0 + l1) / 2));
    CHECK(loss_ce(logits, {2, 0}, 0.1, net) == doctest::Approx((l0 + l1) / 2 + 0.1));
    CHECK_THROWS_AS(loss_ce(logits, {3, 0}, 0.0, net), ArgumentError);
    logits(0, 0) = std::nan("");
    CHECK_THROWS_AS(loss_ce(logits, {2, 0}, 0.0, net), NumericError);
}

TEST_CASE("gradients match central differences") {
    Rng rng(2);
    NetConfig c;
    c.layer_sizes = {20, 6, 6, 4};
    NetState net = init_net(c, rng);
    const RowMatrix x = random_batch(8, 20, rng);
    std::vector<int> y{0, 1, 2, 3, 0, 1, 2, 3};
    for (double lambda : {0.0, 0.05}) {
        const LossAndGrad lg = grad(net, x, y, lambda);
        CHECK(lg.loss == doctest::Approx(loss_ce(forward(net, x), y, lambda, net)));
        for (std::size_t l = 0; l < net.weights.size(); ++l)
            for (Eigen::Index i = 0; i < net.weights[l].rows(); ++i)
                for (Eigen::Index j = 0; j < net.weights[l].cols(); ++j) {
                    const double h = 1e-6, w0 = net.weights[l](i, j);
                    net.weights[l](i, j) = w0 + h;
                    const double up = loss_ce(forward(net, x), y, lambda, net);
                    net.weights[l](i, j) = w0 - h;
                    const double dn = loss_ce(forward(net, x), y, lambda, net);
                    net.weights[l](i, j) = w0;
                    const double fd = (up - dn) / (2 * h);
                    CHECK(std::abs(fd - lg.grads[l](i, j)) <= 1e-6 * (1.0 + std::abs(fd)));
                }
    }
}

TEST_CASE("one Adam step by hand") {
    NetState net;
    net.weights.push_back(Eigen::MatrixXd::Constant(1, 2, 1.0));
    AdamState opt = AdamState::zeros_like(net);
    Eigen::MatrixXd g(1, 2);
    g << 0.5, -2.0;
    adam_step(net, {g}, opt, 0.01);
    // First step: m_hat = g, v_hat = g^2, so the update is lr * g / (|g| + eps).
    CHECK(net.weights[0](0, 0) == doctest::Approx(1.0 - 0.01 * 0.5 / (0.5 + 1e-8)));
    CHECK(net.weights[0](0, 1) == doctest::Approx(1.0 + 0.01 * 2.0 / (2.0 + 1e-8)));
    adam_step(net, {g}, opt, 0.01);
    const double m = 0.9 * 0.05 + 0.1 * 0.5, v = 0.999 * 0.00025 + 0.001 * 0.25;
    const double step = 0.01 * (m / (1 - 0.81)) / (std::sqrt(v / (1 - 0.999 * 0.999)) + 1e-8);
    CHECK(net.weights[0](0, 0) == doctest::Approx(1.0 - 0.01 * 0.5 / (0.5 + 1e-8) - step));
    CHECK(opt.step == 2);
}

TEST_CASE("training is deterministic and learns") {
    const MnistData data = synthetic_mnist(1000, 300, 5);
    const NetConfig c = small_config();
    const RunResult a = train_run(c, data, 1);
    const RunResult b = train_run(c, data, 1);
    REQUIRE(a.snapshots.size() == 3);
    REQUIRE(a.snapshots[0].size() == 3);
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t e = 0; e < 3; ++e) CHECK((a.snapshots[k][e] - b.snapshots[k][e]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.accuracies == b.accuracies);
    CHECK(a.accuracies.back() > a.accuracies.front());
    const RunResult other = train_run(c, data, 2);
    CHECK((other.snapshots[0][0] - a.snapshots[0][0]).cwiseAbs().maxCoeff() > 0.0);
    CHECK(run_seed(17, 1) != run_seed(17, 2));
    CHECK(run_seed(17, 1) != run_seed(18, 1));
}

TEST_CASE("ensemble assembly is independent of the thread count") {
    const MnistData data = synthetic_mnist(400, 100, 6);
    const NetConfig c = small_config();
    const EnsembleResult one = generate_ensemble(c, data, 1);
    const EnsembleResult three = generate_ensemble(c, data, 3);
    REQUIRE(one.store.runs == 3);
    CHECK(one.store.d == 10);
    CHECK(one.store.layer_count == 3);
    CHECK(one.store.matrices.size() == 3u * 3u * 3u);
    one.store.validate();
    for (std::size_t s = 0; s < one.store.matrices.size(); ++s)
        CHECK((one.store.matrices[s] - three.store.matrices[s]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(one.store.accuracies == three.store.accuracies);
    // Layer 2 of run 1 at epoch 0 is exactly that run's initialization.
    Rng rng(run_seed(c.master_seed, 1));
    const NetState init = init_net(c, rng);
    CHECK((one.store.at(1, 1, 0) - init.weights[2]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("diverging runs are reported and excluded") {
    MnistData data = synthetic_mnist(200, 50, 7);
    NetConfig c = small_config();
    c.epochs = 1;
    c.runs = 2;
    data.train_images.pixels[5] = std::nan("");
    CHECK_THROWS_AS(train_run(c, data, 0), RunError);
    const EnsembleResult r = generate_ensemble(c, data, 1);
    CHECK(r.failed_runs == std::vector<int>{0, 1});
    CHECK(r.store.runs == 0);
}

TEST_CASE("configuration checks") {
    NetConfig c;
    c.analyzed_layers = {0};
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    const NetConfig w = NetConfig::width_variant(40);
    w.validate();
    CHECK(w.analyzed_dim() == 40);
    CHECK(w.layer_sizes == std::vector<int>{784, 40, 40, 10});
}
