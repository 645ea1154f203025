#pragma once

#include "roughlab/sampled_path.hpp"

namespace roughlab {

// Riemann-Liouville fractional integral of order alpha in (0,1):
//   (I^alpha f)(t) = (1/Gamma(alpha)) \int_0^t (t-s)^{alpha-1} f(s) ds.
// The kernel is integrated exactly against the piecewise-linear interpolant
// of f (product integration), so the singularity costs no order.
SampledPath frac_integral(const SampledPath& f, double alpha);

// Fractional derivative of order alpha in (0,1), computed as the grid
// derivative of the product-integrated (1-alpha)-integral:
//   (D^alpha f)(t) = (1/Gamma(1-alpha)) d/dt \int_0^t (t-s)^{-alpha} f(s) ds.
// Inverse of frac_integral on its range; meaningful for f with f(0) = 0 and
// Holder regularity above alpha.
SampledPath frac_derivative(const SampledPath& f, double alpha);

}  // namespace roughlab
