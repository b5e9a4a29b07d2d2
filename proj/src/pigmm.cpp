#include "pigw/pigmm.hpp"
#include "pigw/errors.hpp"
#include "pigw/invariants.hpp"
#include "pigw/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pigw {

void require_model_dim(int d) {
    if (d < 4) throw DomainError("permutation-invariant Gaussian model needs d >= 4, got " + std::to_string(d));
}

// ---------------------------------------------------------------------------
// Coincidence classes
// ---------------------------------------------------------------------------

PairClass classify_pair(int a, int b, int c, int d) {
    const bool first_diag = a == b;
    const bool second_diag = c == d;
    if (first_diag && second_diag) return a == c ? PairClass::ii_ii : PairClass::ii_jj;
    if (!first_diag && second_diag) return classify_pair(c, d, a, b);
    if (first_diag) {
        if (a == c) return PairClass::ii_ij;
        if (a == d) return PairClass::ii_ji;
        return PairClass::ii_jk;
    }
    if (a == c && b == d) return PairClass::ij_ij;
    if (a == d && b == c) return PairClass::ij_ji;
    if (a == c) return PairClass::ij_ik;
    if (b == d) return PairClass::ij_kj;
    if (b == c || a == d) return PairClass::ij_jk; // (ij, ki) is (ki, ij) read the other way round
    return PairClass::ij_kl;
}

const char* pair_class_name(PairClass c) {
    static const char* names[kPairClassCount] = {"ii,ii", "ii,jj", "ii,ij", "ii,ji", "ii,jk", "ij,ij",
                                                 "ij,ji", "ij,ik", "ij,kj", "ij,jk", "ij,kl"};
    return names[static_cast<int>(c)];
}

double PatternMoments::covariance(int a, int b, int c, int dd) const {
    return moment(classify_pair(a, b, c, dd)) - mean(a, b) * mean(c, dd);
}

namespace {

// One index tuple (a, b, c, d) realizing each class, valid for d >= 4.
constexpr int kRepresentative[kPairClassCount][4] = {
    {0, 0, 0, 0}, {0, 0, 1, 1}, {0, 0, 0, 1}, {0, 0, 1, 0}, {0, 0, 1, 2}, {0, 1, 0, 1},
    {0, 1, 1, 0}, {0, 1, 0, 2}, {0, 1, 2, 1}, {0, 1, 1, 2}, {0, 1, 2, 3},
};

double delta(int a, int b) { return a == b ? 1.0 : 0.0; }

} // namespace

// ---------------------------------------------------------------------------
// Fit and its inverse
// ---------------------------------------------------------------------------

ModelParams fit_params(const LqVector& I, int d_int) {
    require_model_dim(d_int);
    const double d = d_int;
    const double I1 = I[0], I2 = I[1], I3 = I[2], I4 = I[3], I5 = I[4], I6 = I[5], I7 = I[6], I8 = I[7],
                 I9 = I[8], I10 = I[9], I11 = I[10], I12 = I[11], I13 = I[12];
    const double d2 = d * d;
    const double s1 = std::sqrt(d - 1.0);
    const double s2 = std::sqrt(d - 2.0);

    ModelParams p;
    p.d = d_int;
    auto& f = p.f;
    f[0] = I2 / d;
    f[1] = (d * I1 - I2) / (d * s1);
    f[2] = -(I2 * I2 - I10) / d2;
    f[3] = -(d * I1 * I2 - I2 * I2 + I10 - d * I13) / (d2 * s1);
    f[4] = -(d2 * I1 * I1 - 2 * d * I1 * I2 + I2 * I2 - I10 - d2 * I12 + 2 * d * I13) / (d2 * (d - 1));
    f[5] = (d * I8 - I10) / (d2 * (d - 1));
    f[6] = (d * I9 - I10) / (d2 * (d - 1));
    f[7] = (d2 * I6 - d * I8 - d * I9 + 2 * I10 - d * I13) / (d2 * (d - 1) * s2);
    f[8] = (d * I7 - I10) / (d2 * (d - 1));
    f[9] = (d2 * I5 - d * I7 - d * I9 + 2 * I10 - d * I13) / (d2 * (d - 1) * s2);
    f[10] = -(2 * d2 * I5 + 2 * d2 * I6 - d * I7 - d * I8 - 2 * d * I9 + 4 * I10 - d2 * d * I11 + d2 * I12 -
              4 * d * I13) /
            (d2 * (d - 1) * (d - 2));
    f[11] = ((d - 1) * (d - 2) * I3 + (d - 1) * (d - 2) * I4 + 4 * (d - 1) * I5 + 4 * (d - 1) * I6 -
             (d - 1) * I7 - (d - 1) * I8 - 2 * (d - 1) * I9 + 2 * I10 - 2 * d * (d - 1) * I11 + 2 * I12 -
             4 * I13) /
            (d * (d - 1) * (d - 2) * (d - 3));
    f[12] = (d * I3 - d * I4 - I7 - I8 + 2 * I9) / (d * (d - 1) * (d - 2));
    return p;
}

LqVector expected_lq_invariants(const ModelParams& p) {
    require_model_dim(p.d);
    const double d = p.d;
    LqVector I{};
    I[1] = d * p.f[0];
    I[0] = p.f[0] + std::sqrt(d - 1.0) * p.f[1];

    // With I_1, I_2 fixed the fit is affine in I_3..I_13: f_q = A I_q + b.
    LqVector probe = I;
    const auto base = fit_params(probe, p.d).f;
    Eigen::Matrix<double, 11, 11> A;
    Eigen::Matrix<double, 11, 1> rhs;
    for (int col = 0; col < 11; ++col) {
        probe = I;
        probe[2 + col] = 1.0;
        const auto fc = fit_params(probe, p.d).f;
        for (int row = 0; row < 11; ++row) A(row, col) = fc[2 + row] - base[2 + row];
    }
    for (int row = 0; row < 11; ++row) rhs(row) = p.f[2 + row] - base[2 + row];
    const Eigen::Matrix<double, 11, 1> q = A.fullPivLu().solve(rhs);
    for (int k = 0; k < 11; ++k) I[2 + k] = q(k);
    return I;
}

// ---------------------------------------------------------------------------
// Entry-level covariance from the representation blocks
// ---------------------------------------------------------------------------

double entry_mean(const ModelParams& p, int i, int j) {
    const double d = p.d;
    if (i == j) return p.f[0] / d + p.f[1] * std::sqrt(d - 1.0) / d;
    return p.f[0] / d - p.f[1] / (d * std::sqrt(d - 1.0));
}

double entry_covariance(const ModelParams& p, int i, int j, int k, int l) {
    const double d = p.d;
    const auto& f = p.f;
    auto P = [&](int a, int b) { return delta(a, b) - 1.0 / d; };

    // V0: the all-ones direction and the traceless diagonal direction.
    const double u_ij = 1.0 / d, u_kl = 1.0 / d;
    const double t_ij = (delta(i, j) - 1.0 / d) / std::sqrt(d - 1.0);
    const double t_kl = (delta(k, l) - 1.0 / d) / std::sqrt(d - 1.0);
    double cov = f[2] * u_ij * u_kl + f[3] * (u_ij * t_kl + t_ij * u_kl) + f[4] * t_ij * t_kl;

    // VH: three copies of the (d-1)-dimensional standard representation
    // (column-sum, row-sum and diagonal-type embeddings). K[a][b] is the sum
    // over an orthonormal basis h of V_H of C^a_ij(h) C^b_kl(h).
    auto g_sum = [&](int a, int b) { return delta(a, b) - 2.0 / d; };              // sum_x g^{ab}_x
    auto Pg = [&](int a, int b, int x) {                                           // (P g^{ab})_x
        return delta(a, b) * delta(a, x) - (delta(a, x) + delta(b, x)) / d - g_sum(a, b) / d;
    };
    const double g_dot = delta(i, j) * delta(k, l) * delta(i, k) -
                         delta(i, j) * (delta(i, k) + delta(i, l)) / d -
                         delta(k, l) * (delta(k, i) + delta(k, j)) / d +
                         (delta(i, k) + delta(i, l) + delta(j, k) + delta(j, l)) / (d * d);
    const double gPg = g_dot - g_sum(i, j) * g_sum(k, l) / d;
    const double s = 1.0 / std::sqrt(d - 2.0);

    double K[3][3];
    K[0][0] = P(j, l) / d;
    K[1][1] = P(i, k) / d;
    K[0][1] = P(j, k) / d;
    K[1][0] = P(i, l) / d;
    K[0][2] = s * Pg(k, l, j);
    K[1][2] = s * Pg(k, l, i);
    K[2][0] = s * Pg(i, j, l);
    K[2][1] = s * Pg(i, j, k);
    K[2][2] = d / (d - 2.0) * gPg;

    const double SH[3][3] = {{f[5], f[6], f[7]}, {f[6], f[8], f[9]}, {f[7], f[9], f[10]}};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) cov += SH[a][b] * K[a][b];

    // V3 is the antisymmetric part of V_H (x) V_H; V2 the symmetric part with
    // its V0 and V_H components removed.
    const double q3 = (P(i, k) * P(j, l) - P(i, l) * P(j, k)) / 2.0;
    const double q2 = (P(i, k) * P(j, l) + P(i, l) * P(j, k)) / 2.0 - P(i, j) * P(k, l) / (d - 1.0) - K[2][2];
    return cov + f[11] * q2 + f[12] * q3;
}

Eigen::VectorXd entry_mean_vector(const ModelParams& p) {
    require_model_dim(p.d);
    const int d = p.d;
    Eigen::VectorXd m(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i * d + j) = entry_mean(p, i, j);
    return m;
}

Eigen::MatrixXd entry_covariance_matrix(const ModelParams& p) {
    require_model_dim(p.d);
    const int d = p.d;
    Eigen::MatrixXd C(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) C(i * d + j, k * d + l) = entry_covariance(p, i, j, k, l);
    return C;
}

// ---------------------------------------------------------------------------
// Coordinate changes
// ---------------------------------------------------------------------------

PatternMoments to_pattern_moments(const ModelParams& p) {
    require_model_dim(p.d);
    PatternMoments pm;
    pm.d = p.d;
    pm.mean_diag = entry_mean(p, 0, 0);
    pm.mean_off = entry_mean(p, 0, 1);
    for (int c = 0; c < kPairClassCount; ++c) {
        const int* r = kRepresentative[c];
        pm.second[c] = entry_covariance(p, r[0], r[1], r[2], r[3]) + entry_mean(p, r[0], r[1]) * entry_mean(p, r[2], r[3]);
    }
    return pm;
}

LqVector lq_from_pattern_moments(const PatternMoments& pm) {
    LqVector out{};
    for (int id = 1; id <= kParamCount; ++id) {
        const InvariantId& g = invariant(id);
        double total = 0.0;
        for_each_set_partition(g.node_count, [&](const std::vector<int>& lab, int blocks) {
            const double count = falling_factorial(pm.d, blocks);
            if (count == 0.0) return;
            const Edge& e0 = g.edges[0];
            double value;
            if (g.order == 1) {
                value = pm.mean(lab[e0.src], lab[e0.dst]);
            } else {
                const Edge& e1 = g.edges[1];
                value = pm.moment(classify_pair(lab[e0.src], lab[e0.dst], lab[e1.src], lab[e1.dst]));
            }
            total += count * value;
        });
        out[id - 1] = total;
    }
    return out;
}

ModelParams from_pattern_moments(const PatternMoments& pm) {
    require_model_dim(pm.d);
    return fit_params(lq_from_pattern_moments(pm), pm.d);
}

BlockGaussian to_blocks(const ModelParams& p) {
    require_model_dim(p.d);
    const auto& f = p.f;
    BlockGaussian b;
    b.d = p.d;
    b.mu1 = f[0];
    b.mu2 = f[1];
    b.S_V0 << f[2], f[3], f[3], f[4];
    b.S_VH << f[5], f[6], f[7], f[6], f[8], f[9], f[7], f[9], f[10];
    b.s_V2 = f[11];
    b.s_V3 = f[12];
    return b;
}

PsdReport psd_check(const ModelParams& p) {
    const BlockGaussian b = to_blocks(p);
    PsdReport r;
    r.min_eig_V0 = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(b.S_V0, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    r.min_eig_VH = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(b.S_VH, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    r.s_V2 = b.s_V2;
    r.s_V3 = b.s_V3;
    constexpr double tol = -1e-12;
    r.is_valid = r.min_eig_V0 >= tol && r.min_eig_VH >= tol && r.s_V2 >= tol && r.s_V3 >= tol;
    return r;
}

ModelParams clip_to_psd(const ModelParams& p) {
    const BlockGaussian b = to_blocks(p);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> e0(b.S_V0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eh(b.S_VH);
    const Eigen::Matrix2d s0 =
        e0.eigenvectors() * e0.eigenvalues().cwiseMax(0.0).asDiagonal() * e0.eigenvectors().transpose();
    const Eigen::Matrix3d sh =
        eh.eigenvectors() * eh.eigenvalues().cwiseMax(0.0).asDiagonal() * eh.eigenvectors().transpose();
    ModelParams out = p;
    out.f[2] = s0(0, 0);
    out.f[3] = 0.5 * (s0(0, 1) + s0(1, 0));
    out.f[4] = s0(1, 1);
    out.f[5] = sh(0, 0);
    out.f[6] = 0.5 * (sh(0, 1) + sh(1, 0));
    out.f[7] = 0.5 * (sh(0, 2) + sh(2, 0));
    out.f[8] = sh(1, 1);
    out.f[9] = 0.5 * (sh(1, 2) + sh(2, 1));
    out.f[10] = sh(2, 2);
    out.f[11] = std::max(p.f[11], 0.0);
    out.f[12] = std::max(p.f[12], 0.0);
    return out;
}

ModelParams simple_gaussian_params(double sigma2, int d) {
    require_model_dim(d);
    if (!(sigma2 > 0.0)) throw DomainError("simple Gaussian variance must be positive");
    ModelParams p;
    p.d = d;
    for (int slot : {2, 4, 5, 8, 10, 11, 12}) p.f[slot] = sigma2;
    return p;
}

ModelParams uniform_equivalent_params(double sigma, int d) {
    if (!(sigma > 0.0)) throw DomainError("uniform half-width must be positive");
    return simple_gaussian_params(sigma * sigma / 3.0, d);
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

MatrixSampler::MatrixSampler(const ModelParams& p) : d_(p.d) {
    require_model_dim(p.d);
    if (!psd_check(p).is_valid) throw DomainError("cannot sample from a model whose blocks are not PSD");
    mean_ = entry_mean_vector(p);
    const Eigen::MatrixXd C = entry_covariance_matrix(p);
    const Eigen::Index n = C.rows();
    for (double jitter : {0.0, 1e-14, 1e-12, 1e-10}) {
        Eigen::LLT<Eigen::MatrixXd> llt(C + jitter * Eigen::MatrixXd::Identity(n, n));
        if (llt.info() == Eigen::Success) {
            factor_ = llt.matrixL();
            return;
        }
    }
    throw DomainError("entry covariance could not be factorized");
}

Eigen::MatrixXd MatrixSampler::draw(Rng& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(mean_.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
    const Eigen::VectorXd x = mean_ + factor_.triangularView<Eigen::Lower>() * z;
    Eigen::MatrixXd W(d_, d_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) W(i, j) = x(i * d_ + j);
    return W;
}

Eigen::MatrixXd sample_matrix(const ModelParams& p, Rng& rng) { return MatrixSampler(p).draw(rng); }

} // namespace pigw
