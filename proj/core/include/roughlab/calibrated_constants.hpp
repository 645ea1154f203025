#pragma once

namespace roughlab {

// Empirically calibrated constants: the quantitative inequalities implemented
// in norris.hpp hold with *some* finite constant; each value below is 1.5x
// the maximum ratio observed over the frozen 1000-instance calibration suite
// (master seed 424242) and is validated against a disjoint suite. Regenerate
// with `roughlab experiment norris-suite --calibrate`.
namespace calibrated {

// Theorem-style certificate: ||A||_inf + ||B||_inf <= M R^6 ||Z||_inf^r.
extern const double norris_m;

// Derivative bound: ||Z'||_inf <= (M ||Z||_inf / L) max(...).
extern const double prop_derivative_m;

// Derivative interpolation: ||B||_inf <= M ||F||_inf max(1/T, ...).
extern const double interp_derivative_m;

// Norm-vs-cutoff ratio (||X||_g^2 + ||area||_2g) / Lambda^{1/q}, empirical
// bound over the calibration seeds at (gamma, beta, q) = (0.35, 0.37, 52).
extern const double lambda_ratio_bound;

// Suite geometry (shared by calibration and validation).
extern const unsigned long long calibration_master_seed;
extern const unsigned long long validation_master_seed;
extern const int suite_size;

}  // namespace calibrated
}  // namespace roughlab
