#pragma once

#include <cstdint>
#include <map>

#include "roughlab/rough_path.hpp"

namespace roughlab {

enum class FbmSynthesis { Auto, CirculantEmbedding, Cholesky };

// One d-dimensional fBm draw on the grid, independent coordinates, pinned to
// zero at the first node. The finite-dimensional law on the grid nodes is
// exact: increments are synthesized by circulant embedding of the stationary
// increment covariance (FFT), falling back to a dense Cholesky factorization
// when the embedding fails to be nonnegative.
// Deterministic given (seed, grid, hurst, d).
SampledPath sample_fbm(double hurst, const Grid& grid, std::uint64_t seed, int d = 1,
                       FbmSynthesis method = FbmSynthesis::Auto);

// A lazily refinable fBm realization. Level 0 is the exact draw above; level
// l+1 inserts the midpoints of level l, each drawn from its conditional
// Gaussian law given the nearby already-sampled nodes (truncated-stencil
// conditioning; existing nodes are never modified, so levels are nested and
// every level is deterministic given the master seed).
class FbmSampler {
public:
  FbmSampler(double hurst, Grid grid, std::uint64_t seed, int d = 1,
             FbmSynthesis method = FbmSynthesis::Auto, int stencil = 6);

  double hurst() const { return hurst_; }
  const Grid& base_grid() const { return grid_; }
  std::uint64_t seed() const { return seed_; }

  // Path on base_grid().refined(level); cached.
  const SampledPath& level(int l);

private:
  double hurst_;
  Grid grid_;
  std::uint64_t seed_;
  int d_;
  int stencil_;
  std::map<int, SampledPath> levels_;
};

// Geometric lift of an fBm draw at dyadic refinement level: per-step tensors
// of the coarse grid are assembled from the piecewise-linear lift of the
// refined path. Declared Holder exponent gamma is the caller's choice
// (gamma < hurst).
RoughPath lift_fbm(FbmSampler& sampler, int level, double gamma);

// Lift of a plain sampled path "refined" by linear midpoint insertion. The
// inserted points lie on the chords, so this coincides with lift_smooth at
// every level; it exists so deterministic inputs can flow through the same
// interface.
RoughPath lift_fbm(const SampledPath& path, int level, double gamma);

// Exact covariance of fBm pinned at t=a: E X_s X_t with X_a = 0.
double fbm_covariance(double hurst, double a, double s, double t);

}  // namespace roughlab
