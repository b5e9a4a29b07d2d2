#pragma once

#include "pigw/pigmm.hpp"
#include "pigw/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace pigw::testing {

inline double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// |a - b| relative to `scale`, for comparisons where either side may be ~0.
inline double scaled_err(double a, double b, double scale) { return std::abs(a - b) / scale; }

inline Eigen::MatrixXd random_matrix(int d, Rng& rng, double sd = 1.0) {
    std::normal_distribution<double> n(0.0, sd);
    Eigen::MatrixXd W(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) W(i, j) = n(rng);
    return W;
}

// Random model with positive definite blocks and entries of order `scale`.
inline ModelParams random_psd_params(int d, Rng& rng, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.2, 1.0);
    Eigen::Matrix2d A;
    Eigen::Matrix3d B;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) A(i, j) = n(rng);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) B(i, j) = n(rng);
    const Eigen::Matrix2d S0 = A * A.transpose() + 0.1 * Eigen::Matrix2d::Identity();
    const Eigen::Matrix3d SH = B * B.transpose() + 0.1 * Eigen::Matrix3d::Identity();
    ModelParams p;
    p.d = d;
    p.f = {n(rng),     n(rng),     S0(0, 0),   S0(0, 1), S0(1, 1), SH(0, 0), SH(0, 1),
           SH(0, 2),   SH(1, 1),   SH(1, 2),   SH(2, 2), u(rng),   u(rng)};
    for (int k = 0; k < 2; ++k) p.f[k] *= std::sqrt(scale);
    for (int k = 2; k < kParamCount; ++k) p.f[k] *= scale;
    return p;
}

} // namespace pigw::testing
