#pragma once

#include <optional>

#include "roughlab/vector_field.hpp"

namespace roughlab {

// [U, V](z) = DV(z) U(z) - DU(z) V(z).
Eigen::VectorXd lie_bracket(const VectorField& u, const VectorField& v,
                            const Eigen::VectorXd& z);

// Bracket ladder: level 0 holds the driving fields V_1..V_d; level n+1 adds
// [U, V_k] for U new at level n and k >= 0 (the drift participates in
// bracketing but is not itself a member). Bracket fields of affine parents
// stay affine with exact derivatives; otherwise Jacobians of bracket fields
// fall back to central differences, and the ladder refuses to nest finite
// differencing deeper than 3 levels.
class BracketLadder {
public:
  BracketLadder(const VectorFieldSystem& vfs, int max_level);

  int max_level() const { return static_cast<int>(levels_.size()) - 1; }
  // All member fields of V_n (nested: includes every lower level).
  const std::vector<VectorField>& level(int n) const { return levels_[n]; }
  // Depth of finite-difference nesting used anywhere up to max_level.
  int fd_depth() const { return fd_depth_; }

private:
  std::vector<std::vector<VectorField>> levels_;
  int fd_depth_ = 0;
};

struct HormanderReport {
  int rank = 0;
  std::optional<int> full_rank_level;  // first level achieving full rank
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  int n_fields = 0;
  bool precision_warning = false;  // deep finite-difference nesting involved
};

// Numerical rank of span{U(z) : U in V_N} with threshold rank_tol * sigma_max.
HormanderReport hormander_rank(const VectorFieldSystem& vfs,
                               const Eigen::VectorXd& z, int max_level,
                               double rank_tol = 1e-8);

}  // namespace roughlab
