#pragma once

#include "pigw/pigmm.hpp"

#include <Eigen/Dense>

#include <vector>

namespace pigw {

// |observed - expectation| / se.
double deviation_lq(double observed, double expectation, double se);

// |theory - exp_mean| / exp_std, with exp_std the spread over runs.
double deviation_cq(double theory, double exp_mean, double exp_std);

struct NormalizedChange {
    double value = 0.0;
    bool undefined = false; // both deviations zero; value reported as 0
};

// (d_final - d_start) / (d_final + d_start), in [-1, 1] for non-negative inputs.
NormalizedChange normalized_change(double d_start, double d_final);

// Pearson product-moment correlation coefficient.
double pmcc(const std::vector<double>& x, const std::vector<double>& y);

struct WassersteinOptions {
    // Clip negative block eigenvalues to zero instead of refusing the input.
    bool clip_negative = false;
};

// Squared 2-Wasserstein distance between the two Gaussians, evaluated block
// by block on the representation decomposition.
double wasserstein_squared(const ModelParams& a, const ModelParams& b, const WassersteinOptions& opt = {});
double wasserstein(const ModelParams& a, const ModelParams& b, const WassersteinOptions& opt = {});

// Squared 2-Wasserstein distance between two dense Gaussians (means and
// covariances), via Tr(S1 + S2 - 2 (S1^{1/2} S2 S1^{1/2})^{1/2}).
double gaussian_wasserstein_squared(const Eigen::VectorXd& m1, const Eigen::MatrixXd& S1, const Eigen::VectorXd& m2,
                                    const Eigen::MatrixXd& S2);

} // namespace pigw
