#include "pigw/metrics.hpp"
#include "pigw/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pigw {

double deviation_lq(double observed, double expectation, double se) {
    if (!(se > 0.0)) throw DomainError("standard error must be positive");
    return std::abs(observed - expectation) / se;
}

double deviation_cq(double theory, double exp_mean, double exp_std) {
    if (!(exp_std > 0.0)) throw DomainError("experimental standard deviation must be positive");
    return std::abs(theory - exp_mean) / exp_std;
}

NormalizedChange normalized_change(double d_start, double d_final) {
    const double denom = d_final + d_start;
    if (denom == 0.0) return {0.0, true};
    return {(d_final - d_start) / denom, false};
}

double pmcc(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ArgumentError("pmcc needs equal-length vectors of length >= 2");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw DomainError("pmcc undefined for a constant vector");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

template <typename M>
M psd_sqrt(const M& S) {
    Eigen::SelfAdjointEigenSolver<M> es(S);
    const auto ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

// Tr (A^{1/2} B A^{1/2})^{1/2} for PSD A, B.
template <typename M>
double fidelity_trace(const M& A, const M& B) {
    const M ra = psd_sqrt(A);
    const M inner = ra * B * ra;
    Eigen::SelfAdjointEigenSolver<M> es(0.5 * (inner + inner.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

BlockGaussian prepared_blocks(const ModelParams& p, const WassersteinOptions& opt) {
    if (opt.clip_negative) return to_blocks(clip_to_psd(p));
    if (!psd_check(p).is_valid) throw DomainError("Wasserstein distance needs PSD model blocks");
    return to_blocks(p);
}

} // namespace

double wasserstein_squared(const ModelParams& pa, const ModelParams& pb, const WassersteinOptions& opt) {
    if (pa.d != pb.d) throw ArgumentError("Wasserstein distance between models of different d");
    const BlockGaussian a = prepared_blocks(pa, opt);
    const BlockGaussian b = prepared_blocks(pb, opt);

    const double mean_term = (a.mu1 - b.mu1) * (a.mu1 - b.mu1) + (a.mu2 - b.mu2) * (a.mu2 - b.mu2);
    auto trace = [](const BlockGaussian& g) {
        return g.mult_V0() * g.S_V0.trace() + g.mult_VH() * g.S_VH.trace() + g.mult_V2() * g.s_V2 +
               g.mult_V3() * g.s_V3;
    };
    const double cross = a.mult_V0() * fidelity_trace(a.S_V0, b.S_V0) +
                         a.mult_VH() * fidelity_trace(a.S_VH, b.S_VH) +
                         a.mult_V2() * std::sqrt(a.s_V2 * b.s_V2) + a.mult_V3() * std::sqrt(a.s_V3 * b.s_V3);
    const double scale = 1.0 + trace(a) + trace(b);
    const double d2 = mean_term + trace(a) + trace(b) - 2.0 * cross;
    if (d2 < 0.0) {
        if (d2 > -1e-12 * scale) return 0.0;
        throw NumericError("negative squared Wasserstein distance");
    }
    return d2;
}

double wasserstein(const ModelParams& a, const ModelParams& b, const WassersteinOptions& opt) {
    return std::sqrt(wasserstein_squared(a, b, opt));
}

double gaussian_wasserstein_squared(const Eigen::VectorXd& m1, const Eigen::MatrixXd& S1, const Eigen::VectorXd& m2,
                                    const Eigen::MatrixXd& S2) {
    if (m1.size() != m2.size() || S1.rows() != m1.size() || S2.rows() != m2.size())
        throw ArgumentError("dense Wasserstein shape mismatch");
    const double d2 = (m1 - m2).squaredNorm() + S1.trace() + S2.trace() - 2.0 * fidelity_trace(S1, S2);
    return std::max(d2, 0.0);
}

} // namespace pigw
