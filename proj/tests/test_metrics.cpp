#include "pigw/errors.hpp"
#include "pigw/metrics.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace pigw;
using pigw::testing::random_psd_params;
using pigw::testing::rel_err;

TEST_CASE("deviation measures") {
    CHECK(deviation_lq(1.5, 1.0, 0.25) == doctest::Approx(2.0));
    CHECK(deviation_lq(0.5, 1.0, 0.25) == doctest::Approx(2.0));
    CHECK(deviation_cq(3.0, 2.0, 0.5) == doctest::Approx(2.0));
    Rng rng(1);
    std::uniform_real_distribution<double> u(-5.0, 5.0), pos(0.1, 3.0);
    for (int t = 0; t < 100; ++t) {
        const double o = u(rng), e = u(rng), se = pos(rng), c = pos(rng);
        CHECK(deviation_lq(c * o, c * e, c * se) == doctest::Approx(deviation_lq(o, e, se)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(deviation_lq(1.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(deviation_cq(1.0, 1.0, -1.0), DomainError);
}

TEST_CASE("normalized change") {
    CHECK(normalized_change(1.0, 3.0).value == doctest::Approx(0.5));
    CHECK(normalized_change(3.0, 1.0).value == doctest::Approx(-0.5));
    const NormalizedChange z = normalized_change(0.0, 0.0);
    CHECK(z.undefined);
    CHECK(z.value == 0.0);
    Rng rng(2);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int t = 0; t < 1000; ++t) {
        const double v = normalized_change(u(rng), u(rng)).value;
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("pmcc") {
    CHECK(pmcc({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0));
    CHECK(pmcc({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0));
    CHECK(pmcc({1, 2, 3, 4}, {1, 3, 2, 4}) == doctest::Approx(0.8));
    CHECK_THROWS_AS(pmcc({1, 1, 1}, {1, 2, 3}), DomainError);
    CHECK_THROWS_AS(pmcc({1, 2}, {1, 2, 3}), ArgumentError);
}

TEST_CASE("isotropic Gaussians") {
    for (int d : {4, 10, 40}) {
        const double s1 = 0.3, s2 = 0.7;
        const double w2 = wasserstein_squared(simple_gaussian_params(s1 * s1, d), simple_gaussian_params(s2 * s2, d));
        CHECK(w2 == doctest::Approx(d * d * (s1 - s2) * (s1 - s2)).epsilon(1e-13));
    }
}

TEST_CASE("block formula equals the dense Bures distance") {
    Rng rng(3);
    for (int d : {4, 6}) {
        for (int t = 0; t < 10; ++t) {
            const ModelParams a = random_psd_params(d, rng, 0.1);
            const ModelParams b = random_psd_params(d, rng, 0.1);
            const double dense = gaussian_wasserstein_squared(entry_mean_vector(a), entry_covariance_matrix(a),
                                                              entry_mean_vector(b), entry_covariance_matrix(b));
            CHECK(rel_err(wasserstein_squared(a, b), dense) < 1e-9);
        }
    }
}

TEST_CASE("metric axioms on sampled models") {
    Rng rng(4);
    std::vector<ModelParams> ps;
    for (int k = 0; k < 30; ++k) ps.push_back(random_psd_params(10, rng, 0.05));
    std::uniform_int_distribution<int> pick(0, 29);
    for (int t = 0; t < 200; ++t) {
        const auto& a = ps[pick(rng)];
        const auto& b = ps[pick(rng)];
        const auto& c = ps[pick(rng)];
        const double ab = wasserstein(a, b), bc = wasserstein(b, c), ac = wasserstein(a, c);
        CHECK(ab >= 0.0);
        CHECK(std::abs(ab - wasserstein(b, a)) < 1e-12);
        CHECK(ac <= ab + bc + 1e-9);
    }
    for (const auto& p : ps) CHECK(wasserstein(p, p) < 1e-6);
    // A zero distance pins down every parameter.
    ModelParams q = ps[0];
    q.f[7] += 1e-3;
    CHECK(wasserstein(ps[0], q) > 1e-5);
}

TEST_CASE("non-PSD inputs") {
    Rng rng(5);
    const ModelParams a = random_psd_params(10, rng, 0.1);
    ModelParams b = a;
    b.f[11] = -0.01;
    CHECK_THROWS_AS(wasserstein(a, b), DomainError);
    ModelParams clipped = b;
    clipped.f[11] = 0.0;
    CHECK(wasserstein(a, b, WassersteinOptions{true}) == doctest::Approx(wasserstein(a, clipped)));
    CHECK_THROWS_AS(wasserstein(a, simple_gaussian_params(1.0, 9)), ArgumentError);
}
