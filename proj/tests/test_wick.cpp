#include "pigw/errors.hpp"
#include "pigw/partitions.hpp"
#include "pigw/wick.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace pigw;
using pigw::testing::random_psd_params;

TEST_CASE("set partitions are counted by the Bell numbers") {
    const int bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140};
    for (int n = 0; n <= 8; ++n) {
        int count = 0;
        for_each_set_partition(n, [&](const std::vector<int>& lab, int blocks) {
            ++count;
            int mx = -1;
            for (int x : lab) {
                CHECK(x <= mx + 1);
                mx = std::max(mx, x);
            }
            CHECK(blocks == mx + 1);
        });
        CHECK(count == bell[n]);
    }
    CHECK(falling_factorial(5, 3) == 60.0);
    CHECK(falling_factorial(3, 4) == 0.0);
}

TEST_CASE("partition weights sum to d^n for every invariant") {
    for (int d : {1, 3, 4, 10})
        for (const auto& g : invariant_catalogue())
            CHECK(partition_weight_total(g, d) == doctest::Approx(std::pow(d, g.node_count)));
}

TEST_CASE("isserlis against hand-expanded moments") {
    Eigen::MatrixXd C(4, 4);
    C << 2.0, 0.3, 0.1, -0.2, 0.3, 1.5, 0.4, 0.0, 0.1, 0.4, 1.0, 0.25, -0.2, 0.0, 0.25, 3.0;
    const std::vector<double> m{0.5, -1.0, 0.2, 0.7};
    CHECK(isserlis({m[0], m[1]}, C.topLeftCorner(2, 2)) == doctest::Approx(C(0, 1) + m[0] * m[1]));
    const double three = m[0] * m[1] * m[2] + m[0] * C(1, 2) + m[1] * C(0, 2) + m[2] * C(0, 1);
    CHECK(isserlis({m[0], m[1], m[2]}, C.topLeftCorner(3, 3)) == doctest::Approx(three));
    const std::vector<double> z(4, 0.0);
    CHECK(isserlis(z, C) == doctest::Approx(C(0, 1) * C(2, 3) + C(0, 2) * C(1, 3) + C(0, 3) * C(1, 2)));
    // Single variable, fourth moment: m^4 + 6 m^2 s + 3 s^2.
    const double mu = 0.3, s = 0.8;
    const Eigen::MatrixXd S = Eigen::MatrixXd::Constant(4, 4, s);
    CHECK(isserlis(std::vector<double>(4, mu), S) == doctest::Approx(std::pow(mu, 4) + 6 * mu * mu * s + 3 * s * s));
    CHECK_THROWS_AS(isserlis(std::vector<double>(5, 0.0), Eigen::MatrixXd::Identity(5, 5)), UnsupportedError);
}

TEST_CASE("partition sum equals the literal index sum") {
    Rng rng(21);
    for (int d : {4, 5}) {
        const ModelParams p = random_psd_params(d, rng, 0.3);
        for (int id = 1; id <= kInvariantCount; ++id) {
            if (d == 5 && invariant(id).node_count > 6) continue; // d = 4 covers the large graphs
            const double a = expected_invariant(p, id);
            const double b = brute_expected_invariant(p, id);
            INFO("d=" << d << " I" << id);
            CHECK(std::abs(a - b) <= 1e-9 * (1.0 + std::abs(b)));
        }
    }
}

TEST_CASE("quadratic expectations agree with the closed forms") {
    Rng rng(22);
    const ModelParams p = random_psd_params(9, rng);
    const LqVector lq = expected_lq_invariants(p);
    for (int id = 1; id <= kParamCount; ++id)
        CHECK(expected_invariant(p, id) == doctest::Approx(lq[id - 1]).epsilon(1e-10));
}

TEST_CASE("simple Gaussian moments") {
    const int d = 10;
    const double s2 = 0.1;
    const ModelParams p = simple_gaussian_params(s2, d);
    CHECK(expected_invariant(p, 45) == doctest::Approx(3.0 * d * d * s2 * s2));
    CHECK(expected_invariant(p, 29) == doctest::Approx(3.0 * d * s2 * s2));
    // Odd orders vanish for a zero-mean model.
    for (int id : invariant_range(14, 28)) CHECK(std::abs(expected_invariant(p, id)) < 1e-14);
}

TEST_CASE("Monte Carlo agrees within its standard error") {
    Rng rng(23);
    const ModelParams p = random_psd_params(6, rng, 0.2);
    for (int id : {14, 22, 28, 31, 45, 52}) {
        const McEstimate mc = mc_expected_invariant(p, id, 20000, 99);
        INFO("I" << id);
        CHECK(std::abs(mc.mean - expected_invariant(p, id)) < 5.0 * mc.se);
    }
}

TEST_CASE("limits") {
    const ModelParams p = simple_gaussian_params(1.0, 6);
    CHECK_THROWS_AS(brute_expected_invariant(p, 3), UnsupportedError);
    InvariantId big{0, 5, 1, {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}}};
    CHECK_THROWS_AS(expected_invariant(to_pattern_moments(p), big), UnsupportedError);
}
