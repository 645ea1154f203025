#pragma once

#include "roughlab/controlled_path.hpp"
#include "roughlab/vector_field.hpp"

namespace roughlab {

// The augmented trajectory (Z, J_{0,t}, J_{0,t}^{-1}) of a solve. The inverse
// is integrated alongside J rather than inverted, and the product J J^{-1} is
// a monitored invariant.
struct FlowTriple {
  Grid grid;
  std::vector<Eigen::VectorXd> z;
  std::vector<Eigen::MatrixXd> jac;
  std::vector<Eigen::MatrixXd> jac_inv;

  int dim_state() const { return static_cast<int>(z.front().size()); }
  // max over nodes of |J J^{-1} - I|_F
  double inverse_defect() const;
  // J_{s,t} = J_{0,t} J_{0,s}^{-1}
  Eigen::MatrixXd transition(int i_s, int i_t) const;
};

struct SolveOptions {
  double explosion_threshold = 1e12;
  double tol_jac = 1e-6;  // admissible |J J^{-1} - I| before a flow solve fails
};

// One-step Davie scheme for dZ = V_0 dt + sum_i V_i dX^i:
//   Z_{t+dt} = Z_t + V_0 dt + V_i dX^i + DV_j V_i area^{ij}.
// Returns (Z, V(Z)) as a controlled path. Throws ExplosionError with the
// blow-up time if the state leaves the admissible region.
ControlledPath solve_rde(const VectorFieldSystem& vfs, const Eigen::VectorXd& z0,
                         const RoughPath& rough, const SolveOptions& opts = {});

// Augmented solve carrying the Jacobian and its inverse, stepped with the
// same scheme applied to the matrix evolution equations
//   dJ = DV_0 J dt + DV(Z) J dX,   dJ^{-1} = -J^{-1} DV_0 dt - J^{-1} DV(Z) dX,
// including the second-level corrections (which involve D^2 V).
FlowTriple jacobian_flow(const VectorFieldSystem& vfs, const Eigen::VectorXd& z0,
                         const RoughPath& rough, const SolveOptions& opts = {});

}  // namespace roughlab
