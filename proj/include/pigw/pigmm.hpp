#pragma once

#include "pigw/random.hpp"

#include <Eigen/Dense>

#include <array>
#include <memory>

namespace pigw {

constexpr int kParamCount = 13;

using LqVector = std::array<double, kParamCount>; // I_1..I_13 in slots 0..12

/// The 13 parameters of a permutation-invariant Gaussian matrix model:
/// f1, f2 are the two V0 means; f3..f5 the 2x2 V0 covariance (11, 12, 22);
/// f6..f11 the 3x3 VH covariance (11, 12, 13, 22, 23, 33); f12, f13 the V2 and
/// V3 variances.
struct ModelParams {
    int d = 0;
    std::array<double, kParamCount> f{};
};

/// Coincidence class of a pair of entries (W_ab, W_cd), named by the index
/// pattern with distinct letters standing for distinct values.
enum class PairClass : int {
    ii_ii, ii_jj, ii_ij, ii_ji, ii_jk, ij_ij, ij_ji, ij_ik, ij_kj, ij_jk, ij_kl
};
constexpr int kPairClassCount = 11;

PairClass classify_pair(int a, int b, int c, int d);
const char* pair_class_name(PairClass c);

/// Entry-level first and second moments of a permutation-invariant Gaussian.
struct PatternMoments {
    int d = 0;
    double mean_diag = 0.0;
    double mean_off = 0.0;
    std::array<double, kPairClassCount> second{}; // E[W_ab W_cd] per class

    double moment(PairClass c) const { return second[static_cast<int>(c)]; }
    double mean(int a, int b) const { return a == b ? mean_diag : mean_off; }
    double covariance(int a, int b, int c, int d) const;
};

struct BlockGaussian {
    int d = 0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    Eigen::Matrix2d S_V0 = Eigen::Matrix2d::Zero();
    Eigen::Matrix3d S_VH = Eigen::Matrix3d::Zero();
    double s_V2 = 0.0;
    double s_V3 = 0.0;

    double mult_V0() const { return 1.0; }
    double mult_VH() const { return d - 1.0; }
    double mult_V2() const { return d * (d - 3.0) / 2.0; }
    double mult_V3() const { return (d - 1.0) * (d - 2.0) / 2.0; }
};

struct PsdReport {
    bool is_valid = false;
    double min_eig_V0 = 0.0;
    double min_eig_VH = 0.0;
    double s_V2 = 0.0;
    double s_V3 = 0.0;
};

// Fits the model to ensemble means of I_1..I_13 (closed-form inversion).
ModelParams fit_params(const LqVector& lq_means, int d);

// Population expectations of I_1..I_13 under the model; exact inverse of fit_params.
LqVector expected_lq_invariants(const ModelParams& p);

PatternMoments to_pattern_moments(const ModelParams& p);
ModelParams from_pattern_moments(const PatternMoments& pm);

// Expectations of I_1..I_13 by counting index coincidence patterns.
LqVector lq_from_pattern_moments(const PatternMoments& pm);

BlockGaussian to_blocks(const ModelParams& p);
PsdReport psd_check(const ModelParams& p);

// Nearest model with PSD blocks: negative block eigenvalues set to zero.
ModelParams clip_to_psd(const ModelParams& p);

// Cov(W_ij, W_kl) assembled from the representation blocks.
double entry_covariance(const ModelParams& p, int i, int j, int k, int l);
double entry_mean(const ModelParams& p, int i, int j);

// Dense mean (length d^2) and covariance (d^2 x d^2), row-major entry order i*d + j.
Eigen::VectorXd entry_mean_vector(const ModelParams& p);
Eigen::MatrixXd entry_covariance_matrix(const ModelParams& p);

ModelParams simple_gaussian_params(double sigma2, int d);
ModelParams uniform_equivalent_params(double sigma, int d);

/// Draws d x d matrices from a model. The d^2 x d^2 covariance is factorized
/// once at construction; draw() is const and may be shared across threads.
class MatrixSampler {
public:
    explicit MatrixSampler(const ModelParams& p);
    Eigen::MatrixXd draw(Rng& rng) const;
    int dim() const { return d_; }

private:
    int d_;
    Eigen::VectorXd mean_;
    Eigen::MatrixXd factor_; // lower triangular, factor * factor^T = covariance
};

Eigen::MatrixXd sample_matrix(const ModelParams& p, Rng& rng);

void require_model_dim(int d);

} // namespace pigw
