#include "pigw/baselines.hpp"
#include "pigw/ensembles.hpp"
#include "pigw/errors.hpp"
#include "pigw/invariants.hpp"

#include <cmath>

namespace pigw {

WeightMoments weight_moments(Scheme scheme, int d) {
    if (d < 1) throw DomainError("fan-in must be at least 1");
    const double n = d;
    if (scheme == Scheme::gaussian) return {0.0, 1.0 / n, 0.0, 3.0 / (n * n)};
    return {0.0, 1.0 / (3.0 * n), 0.0, 1.0 / (5.0 * n * n)};
}

InvariantBaseline init_invariant_baseline(const WeightMoments& w, int d_int, int N) {
    if (d_int < 1 || N < 1) throw DomainError("baseline needs d >= 1 and N >= 1");
    const double d = d_int;
    const double m = w.m1, w2 = w.m2, w4 = w.m4;
    const double m_sq = m * m;

    InvariantBaseline b;
    auto& E = b.expectation;
    E[0] = d * m;
    E[1] = d * d * m;
    E[2] = d * d * w2;
    const double e_pair = d * w2 + d * (d - 1) * m_sq; // I4, I5, I6, I12
    E[3] = E[4] = E[5] = E[11] = e_pair;
    const double e_star = d * d * w2 + d * d * (d - 1) * m_sq; // I7, I8
    E[6] = E[7] = e_star;
    const double e_path = d * w2 + (d * d * d - d) * m_sq; // I9, I13
    E[8] = E[12] = e_path;
    E[9] = d * d * w2 + (d * d * d * d - d * d) * m_sq;
    E[10] = d * w2;

    LqVector var{};
    const double w2s = w2 * w2;
    var[0] = d * w2;
    var[1] = d * d * w2;
    var[2] = d * d * (w4 - w2s);
    const double v_pair = d * w4 + d * (d - 2) * w2s;
    var[3] = var[4] = var[5] = var[11] = v_pair;
    const double v_star = d * d * w4 + d * d * (d - 2) * w2s;
    var[6] = var[7] = v_star;
    const double v_path = d * w4 + d * (d * d - 2) * w2s;
    var[8] = var[12] = v_path;
    var[9] = d * d * w4 + d * d * (d * d - 2) * w2s;
    var[10] = d * (w4 - w2s);
    for (int k = 0; k < kParamCount; ++k) b.se[k] = std::sqrt(var[k] / N);
    return b;
}

InvariantBaseline init_invariant_baseline(Scheme scheme, int d, int N) {
    return init_invariant_baseline(weight_moments(scheme, d), d, N);
}

ParamBaseline init_param_baseline(const WeightMoments& w, int d_int, int N_int) {
    require_model_dim(d_int);
    if (N_int < 1) throw DomainError("baseline needs N >= 1");
    const double d = d_int, N = N_int;
    const double w2 = w.m2, w4 = w.m4;

    ParamBaseline b;

    // Expectations: the fit applied to the invariant expectations, plus the
    // finite-N bias of the squared sample means I1^2, I1 I2, I2^2 that enter
    // f3, f4 and f5.
    const InvariantBaseline ib = init_invariant_baseline(w, d_int, 1);
    b.expectation = fit_params(ib.expectation, d_int).f;
    const double v = w.m2 - w.m1 * w.m1; // per-entry variance
    const double v11 = d * v, v12 = d * v, v22 = d * d * v;
    b.expectation[2] += -v22 / (N * d * d);
    b.expectation[3] += -(d * v12 - v22) / (N * d * d * std::sqrt(d - 1));
    b.expectation[4] += -(d * d * v11 - 2 * d * v12 + v22) / (N * d * d * (d - 1));

    const double a = w4, s = w2 * w2;
    const double d2 = d * d, d3 = d2 * d, d4 = d3 * d, d5 = d4 * d;
    const double dm1 = d - 1, dm2 = d - 2, dm3 = d - 3;
    const double N2 = N * N, N3 = N2 * N;
    std::array<double, kParamCount> var{};
    var[0] = w2 / N;
    var[1] = (d + 1) / (N * dm1) * w2;
    var[2] = (1.0 / d2) * (1 / N + 1 / N3) * a + (1 / N + 1 / N2 - 2 / (N * d2) - 2 / (N3 * d2)) * s;
    var[3] = (d + 1) / (d2 * dm1) * (1 / N + 1 / N3) * a +
             (d + 1) / (d2 * dm1) * ((d2 - 2) / N + d2 / N2 - 2 / N3) * s;
    var[4] = (d3 + 4 * d + 1) / (d2 * dm1 * dm1) * (1 / N + 1 / N3) * a +
             1.0 / (d2 * dm1 * dm1) *
                 ((d4 + 4 * d3 - d2 - 8 * d - 2) / N + (d4 + 4 * d3 + d2) / N2 - (2 * d3 + 8 * d + 2) / N3) * s;
    var[5] = (d2 + 1) / (N * d2 * dm1 * dm1) * a + (d3 - d2 - 2) / (N * d2 * dm1 * dm1) * s;
    var[6] = (d + 1) / (N * d2 * dm1 * dm1) * a + (d + 1) * (d2 - 2) / (N * d2 * dm1 * dm1) * s;
    var[7] = (d3 + d2 + 2 * d + 4) / (N * d2 * dm1 * dm1 * dm2) * a +
             (d4 + d3 + 2 * d2 - 4 * d - 8) / (N * d2 * dm1 * dm1 * dm2) * s;
    var[8] = var[5];
    var[9] = var[7];
    var[10] = (d2 - d + 4) * (d3 + d2 + 6 * d + 4) / (N * d2 * dm1 * dm1 * dm2 * dm2) * a -
              (d5 - 9 * d4 - 4 * d3 - 12 * d2 + 40 * d + 32) / (N * d2 * dm1 * dm1 * dm2 * dm2) * s;
    var[11] = (d5 - d4 + d3 + 37 * d2 - 74 * d + 60) / (N * d * dm1 * dm1 * dm2 * dm2 * dm3 * dm3) * a +
              8 * (5 * d3 - 17 * d2 + 24 * d - 15) / (N * d * dm1 * dm1 * dm2 * dm2 * dm3 * dm3) * s;
    var[12] = (d3 + d2 + 2 * d + 4) / (N * d * dm1 * dm1 * dm2 * dm2) * a +
              4 * (d + 1) / (N * d * dm1 * dm1 * dm2) * s;
    for (int k = 0; k < kParamCount; ++k) b.sd[k] = std::sqrt(var[k]);
    return b;
}

ParamBaseline init_param_baseline(Scheme scheme, int d, int N) {
    return init_param_baseline(weight_moments(scheme, d), d, N);
}

BaselineValidation mc_validate_baseline(Scheme scheme, int d, int N, int trials, std::uint64_t seed) {
    require_model_dim(d);
    if (trials < 2 || N < 2) throw ArgumentError("validation needs at least two trials of two matrices");
    const InvariantBaseline ib = init_invariant_baseline(scheme, d, N);
    const ParamBaseline pb = init_param_baseline(scheme, d, N);

    std::vector<LqVector> inv_means(trials);
    std::vector<std::array<double, kParamCount>> fits(trials);
    for (int t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        LqVector acc{};
        for (int n = 0; n < N; ++n) {
            const InvariantVector v = eval_all(init_weights(scheme, d, d, d, rng));
            for (int k = 0; k < kParamCount; ++k) acc[k] += v[k];
        }
        for (double& x : acc) x /= N;
        inv_means[t] = acc;
        fits[t] = fit_params(acc, d).f;
    }

    auto summarize = [&](auto get, double expectation, double spread, double& z, double& ratio) {
        double mean = 0.0;
        for (int t = 0; t < trials; ++t) mean += get(t);
        mean /= trials;
        double ss = 0.0;
        for (int t = 0; t < trials; ++t) ss += (get(t) - mean) * (get(t) - mean);
        const double sd = std::sqrt(ss / (trials - 1));
        z = (mean - expectation) / (spread / std::sqrt(static_cast<double>(trials)));
        ratio = sd / spread;
    };

    BaselineValidation out;
    out.trials = trials;
    for (int k = 0; k < kParamCount; ++k) {
        summarize([&](int t) { return inv_means[t][k]; }, ib.expectation[k], ib.se[k], out.z_invariant[k],
                  out.se_ratio[k]);
        summarize([&](int t) { return fits[t][k]; }, pb.expectation[k], pb.sd[k], out.z_param[k], out.sd_ratio[k]);
        out.max_abs_z_invariant = std::max(out.max_abs_z_invariant, std::abs(out.z_invariant[k]));
        out.max_abs_z_param = std::max(out.max_abs_z_param, std::abs(out.z_param[k]));
    }
    return out;
}

} // namespace pigw
