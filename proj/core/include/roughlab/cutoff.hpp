#pragma once

#include "roughlab/rough_path.hpp"

namespace roughlab {

// Double integral over 0 <= s < t <= T of
//   ( |dX_{st}|^{2q} + |antisym area_{st}|^q ) / |t-s|^{2 beta q}
// by the composite trapezoidal rule on node pairs; cells touching the
// diagonal use the analytic limit 0 of the integrand at s = t.
double lambda_cutoff(const RoughPath& rough, double beta, int q);

// Smooth cutoff chi(Lambda / n): 1 when Lambda <= n, 0 when Lambda >= 2n,
// glued by the standard exp(-1/x) partition in between.
double cutoff_weight(const RoughPath& rough, double n, double beta, int q);

// The bump chi itself (monotone nonincreasing, C-infinity).
double cutoff_chi(double x);

}  // namespace roughlab
