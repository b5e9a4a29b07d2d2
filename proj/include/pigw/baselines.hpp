#pragma once

#include "pigw/dataio.hpp"
#include "pigw/pigmm.hpp"

#include <array>
#include <cstdint>

namespace pigw {

/// Raw moments <w>, <w^2>, <w^3>, <w^4> of a single initial weight.
struct WeightMoments {
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
};

// Moments of the initialization distribution for fan-in d.
WeightMoments weight_moments(Scheme scheme, int d);

struct InvariantBaseline {
    LqVector expectation{};
    LqVector se{}; // standard error of the mean over N matrices
};

struct ParamBaseline {
    std::array<double, kParamCount> expectation{};
    std::array<double, kParamCount> sd{};
};

// Expectations of I_1..I_13 for a d x d matrix of i.i.d. weights and the
// standard error of their mean over N matrices. Variances treat the summed
// terms of each invariant as independent and assume <w> = <w^3> = 0.
InvariantBaseline init_invariant_baseline(const WeightMoments& w, int d, int N);
InvariantBaseline init_invariant_baseline(Scheme scheme, int d, int N);

// Expectations and standard deviations of the fitted f_1..f_13 for an
// ensemble of N i.i.d. initial matrices, neglecting covariances between the
// invariant estimates.
ParamBaseline init_param_baseline(const WeightMoments& w, int d, int N);
ParamBaseline init_param_baseline(Scheme scheme, int d, int N);

struct BaselineValidation {
    int trials = 0;
    LqVector z_invariant{};    // (mean of trial means - expectation) / (SE / sqrt(trials))
    LqVector se_ratio{};       // observed spread of trial means / closed-form SE
    std::array<double, kParamCount> z_param{};   // same for fitted parameters, using sd
    std::array<double, kParamCount> sd_ratio{};
    double max_abs_z_invariant = 0.0;
    double max_abs_z_param = 0.0;
};

// Simulates `trials` ensembles of N initial matrices and standardizes the
// discrepancy between their averages and the closed forms.
BaselineValidation mc_validate_baseline(Scheme scheme, int d, int N, int trials, std::uint64_t seed);

} // namespace pigw
