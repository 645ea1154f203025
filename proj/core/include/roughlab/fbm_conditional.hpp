#pragma once

#include <cstdint>
#include <optional>

#include "roughlab/fbm.hpp"
#include "roughlab/rough_path.hpp"

namespace roughlab {

// Normalization constants for the one-sided (type-II) representation
//   X_t = alpha_H \int_0^t (t-r)^{H-1/2} dW_r.
// alpha_H is fixed by Var(X_1) = 1, which gives alpha_H = sqrt(2H) in closed
// form; gamma_H = (H - 1/2) alpha_H alpha_{1-H} follows the same convention.
// These normalizations are a convention of this library: the absolute scale
// of constants in tail experiments depends on it.
double alpha_h(double hurst);
double gamma_h(double hurst);

// Kernel of the conditional-mean operator:
//   g(v) = v^{H-1/2} + (H-3/2) v \int_0^1 (u+v)^{H-5/2} (1-u)^{1/2-H} du.
// Evaluated on an analytically cancelled form (the v^{H-1/2} terms of both
// summands cancel as v -> 0), with adaptive quadrature after an
// endpoint-flattening substitution; relative error <= 1e-8 over the usable
// range. g(0+) = 0 and g decays at infinity for H < 1/2.
double kernel_g(double v, double hurst);

// Conditional mean of the future given a recorded past w- on [-T-, 0] with
// w-(0) = 0:
//   (G w-)(t) = gamma_H \int_0^{T-} (1/r) g(t/r) w-(-r) dr.
// The integral beyond the recorded horizon is truncated to zero; the kernel
// decay makes the omitted tail O(T-^{H-1/2}). Quadrature: fixed-order
// Gauss-Legendre per past cell against the tabulated kernel; quad_order
// controls the per-cell rule.
SampledPath conditional_drift(const SampledPath& past, double hurst,
                              const Grid& grid, int quad_order = 8);

// A complete noise realization for one solve window.
struct NoiseRecord {
  double hurst;
  std::optional<SampledPath> past;   // w- on [-T-, 0], w-(0) = 0
  Eigen::MatrixXd wiener_increments; // fine-grid increments driving the future
  RoughPath future_lift;             // lifted future on [0, T]
  std::uint64_t seed;
  int lift_level;
};

// Draws the conditional future: Wiener increments on the grid refined
// 2^level times, the type-II Volterra integral by product integration, plus
// conditional_drift(past); the sum is lifted piecewise-linearly and coarsened
// to the requested grid.
NoiseRecord sample_conditional_future(const std::optional<SampledPath>& past,
                                      double hurst, const Grid& grid,
                                      std::uint64_t seed, int level,
                                      double gamma);

}  // namespace roughlab
