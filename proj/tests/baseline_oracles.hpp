#pragma once

// Independent reference computations for the initialization baselines, and
// the printed d = 10, N = 1000 tables they are compared against.

#include "pigw/baselines.hpp"
#include "pigw/invariants.hpp"

#include <array>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

namespace pigw::testing {

// Printed a[b] cell: a x 10^b with two significant figures. a = 0 means zero.
struct Sig2 {
    int mant;
    int exp;
};

inline bool matches(double x, Sig2 t) {
    if (t.mant == 0) return std::abs(x) < 1e-12;
    const double unit = std::pow(10.0, t.exp);
    return std::abs(x - t.mant * unit) <= 0.5 * unit * (1.0 + 1e-9);
}

using Row = std::array<Sig2, kParamCount>;

// d = 10, N = 1000 initialization tables.
inline const Row kInvExpG = {{{0, 0}, {0, 0}, {10, 0}, {10, -1}, {10, -1}, {10, -1}, {10, 0}, {10, 0}, {10, -1}, {10, 0}, {10, -1}, {10, -1}, {10, -1}}};
inline const Row kInvSeG = {{{32, -3}, {10, -2}, {45, -3}, {33, -3}, {33, -3}, {33, -3}, {10, -2}, {10, -2}, {10, -2}, {32, -2}, {14, -3}, {33, -3}, {10, -2}}};
inline const Row kInvExpU = {{{0, 0}, {0, 0}, {33, -1}, {33, -2}, {33, -2}, {33, -2}, {33, -1}, {33, -1}, {33, -2}, {33, -1}, {33, -2}, {33, -2}, {33, -2}}};
inline const Row kInvSeU = {{{18, -3}, {58, -3}, {94, -4}, {10, -3}, {10, -3}, {10, -3}, {33, -3}, {33, -3}, {33, -3}, {11, -2}, {30, -4}, {10, -3}, {33, -3}}};
inline const Row kParExpG = {{{0, 0}, {0, 0}, {10, -2}, {0, 0}, {10, -2}, {10, -2}, {0, 0}, {0, 0}, {10, -2}, {0, 0}, {10, -2}, {10, -2}, {10, -2}}};
inline const Row kParSdG = {{{10, -3}, {11, -3}, {32, -4}, {35, -4}, {46, -4}, {12, -4}, {12, -4}, {15, -4}, {12, -4}, {15, -4}, {25, -4}, {11, -4}, {81, -5}}};
inline const Row kParExpU = {{{0, 0}, {0, 0}, {33, -3}, {0, 0}, {33, -3}, {33, -3}, {0, 0}, {0, 0}, {33, -3}, {0, 0}, {33, -3}, {33, -3}, {33, -3}}};
inline const Row kParSdU = {{{58, -4}, {64, -4}, {11, -4}, {12, -4}, {15, -4}, {38, -5}, {39, -5}, {48, -5}, {38, -5}, {48, -5}, {64, -5}, {29, -5}, {21, -5}}};

// Sum over every index tuple of the invariant's graph of the variance of the
// product term, for i.i.d. zero-mean entries (covariances between terms
// neglected). Also returns the summed term means.
inline std::pair<double, double> termwise_invariant(int id, int d, const WeightMoments& w) {
    const InvariantId& g = invariant(id);
    std::vector<int> idx(g.node_count, 0);
    double mean = 0.0, var = 0.0;
    while (true) {
        std::map<int, int> mult;
        for (const Edge& e : g.edges) ++mult[idx[e.src] * d + idx[e.dst]];
        double m = 1.0, m_sq = 1.0;
        const double raw[] = {1.0, w.m1, w.m2, w.m3, w.m4};
        for (const auto& [entry, k] : mult) {
            m *= raw[k];
            m_sq *= raw[2 * k];
        }
        mean += m;
        var += m_sq - m * m;
        int pos = g.node_count - 1;
        while (pos >= 0 && ++idx[pos] == d) idx[pos--] = 0;
        if (pos < 0) break;
    }
    return {mean, var};
}

// The fit is linear in I_3..I_13 and quadratic in (I_1, I_2); recover its
// coefficients by probing fit_params.
struct FitPolynomial {
    std::array<std::array<double, kParamCount>, kParamCount> lin{}; // lin[j][k] = d f_k / d I_j
    std::array<double, kParamCount> q11{}, q12{}, q22{};
};

inline FitPolynomial probe_fit(int d) {
    FitPolynomial out;
    auto at = [&](std::initializer_list<std::pair<int, double>> entries) {
        LqVector v{};
        for (const auto& [j, x] : entries) v[j] = x;
        return fit_params(v, d).f;
    };
    const auto zero = at({});
    (void)zero; // the fit has no constant term
    for (int j = 2; j < kParamCount; ++j) out.lin[j] = at({{j, 1.0}});
    const auto p1 = at({{0, 1.0}}), m1 = at({{0, -1.0}}), p2 = at({{1, 1.0}}), m2 = at({{1, -1.0}});
    const auto p12 = at({{0, 1.0}, {1, 1.0}});
    for (int k = 0; k < kParamCount; ++k) {
        out.lin[0][k] = (p1[k] - m1[k]) / 2;
        out.lin[1][k] = (p2[k] - m2[k]) / 2;
        out.q11[k] = (p1[k] + m1[k]) / 2;
        out.q22[k] = (p2[k] + m2[k]) / 2;
        out.q12[k] = p12[k] - p1[k] - p2[k];
    }
    return out;
}


struct Propagated {
    std::array<double, kParamCount> mean{};
    std::array<double, kParamCount> var{};
};

// Expectation and variance of the fitted parameters for N i.i.d. initial
// matrices, pushing every ensemble-mean monomial through the probed fit and
// summing the variances of the individual terms.
inline Propagated propagate_fit(const WeightMoments& w, int d_int, int N_int) {
    const double d = d_int, N = N_int;
    const FitPolynomial fp = probe_fit(d_int);
    const double w2 = w.m2, w4 = w.m4, v = w.m2 - w.m1 * w.m1;
    // Products of ensemble means of y1 = trace and y2 = total sum; c counts
    // the entries the two sums share.
    auto prod_mean = [&](double e_p, double e_q, double c) { return e_p * e_q + c * v / N; };
    auto prod_var = [&](double size_p, double size_q, double c) {
        return (N * c * (w4 - w2 * w2) + (N * N * size_p * size_q - N * c) * w2 * w2) / (N * N * N * N);
    };
    std::array<double, kParamCount> e{}, var_i{};
    for (int id = 1; id <= kParamCount; ++id) {
        const auto [mean, var] = termwise_invariant(id, d_int, w);
        e[id - 1] = mean;
        var_i[id - 1] = var / N;
    }
    Propagated out;
    for (int k = 0; k < kParamCount; ++k) {
        double mean = fp.q11[k] * prod_mean(e[0], e[0], d) + fp.q12[k] * prod_mean(e[0], e[1], d) +
                      fp.q22[k] * prod_mean(e[1], e[1], d * d);
        double var = fp.q11[k] * fp.q11[k] * prod_var(d, d, d) + fp.q12[k] * fp.q12[k] * prod_var(d, d * d, d) +
                     fp.q22[k] * fp.q22[k] * prod_var(d * d, d * d, d * d);
        for (int j = 0; j < kParamCount; ++j) {
            mean += fp.lin[j][k] * e[j];
            var += fp.lin[j][k] * fp.lin[j][k] * var_i[j];
        }
        out.mean[k] = mean;
        out.var[k] = var;
    }
    return out;
}

} // namespace pigw::testing
