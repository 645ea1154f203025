#pragma once

#include <cstdint>
#include <vector>

#include "roughlab/sampled_path.hpp"

namespace roughlab {

// Result of the dyadic roughness scan. The certified lower bound for the
// continuous modulus is tied to the discrete value by
//   l_theta_lower = d_theta / (2 * 8^theta),
// which holds exactly by construction.
struct RoughnessReport {
  double theta = 0.0;
  double d_theta = 0.0;
  double l_theta_lower = 0.0;
  int argmin_level = 0;     // dyadic level n of the achieving interval
  int argmin_interval = 0;  // interval index k (1-based, as in I_{k,n})
  Eigen::VectorXd argmin_direction;
  int n_max = 0;
  int sphere_resolution = 0;
};

struct RoughnessOptions {
  int sphere_resolution = 256;
  bool refine = true;          // one golden-section polish around the grid argmin
  std::uint64_t direction_seed = 0x5eedu;  // direction set for dim > 3
};

// Default deepest level: every finest dyadic interval keeps at least 8 nodes.
int default_n_max(const Grid& grid);

// Discrete Holder-roughness modulus
//   D_theta = inf_phi inf_{1<=n<=n_max} inf_k sup_{s,t in I_{k,n}}
//             |<phi, dX_{st}>| / (2^{-n} T)^theta .
// The inner sup is exact over node pairs. The direction infimum is exact for
// dim 1 and approximated for dim >= 2 by a direction grid (uniform angles for
// dim 2, Fibonacci lattice for dim 3, seeded uniform directions above) with
// an optional local golden-section polish; the reported value is then an
// upper bound on the grid modulus within the sphere-grid tolerance.
RoughnessReport discrete_roughness(const SampledPath& path, double theta, int n_max,
                                   const RoughnessOptions& opts = {});

struct TailRow {
  double epsilon;
  double probability;
  double std_error;
};

struct RoughnessTailTable {
  std::vector<TailRow> rows;
  double fitted_slope = 0.0;  // slope of log P against epsilon^{-2}
  bool theta_above_hurst = true;
};

// Monte-Carlo estimates of P(D_theta < eps) over fresh fBm draws. theta <= H
// is allowed but flagged (positivity is not guaranteed in that regime).
RoughnessTailTable roughness_tail_study(double hurst, double theta, int n_samples,
                                        const std::vector<double>& epsilons,
                                        const Grid& grid, int dim,
                                        std::uint64_t seed);

}  // namespace roughlab
