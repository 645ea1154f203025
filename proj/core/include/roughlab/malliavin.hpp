#pragma once

#include "roughlab/rde.hpp"

namespace roughlab {

// Scale constant of the first-order derivative formulas, tied to the type-II
// normalization by the additive case: c = alpha_H (1/2 - H).
double malliavin_c(double hurst);

// Reduced matrix C_T = \int_0^T J^{-1} V(Z) V(Z)^* (J^{-1})^* ds by the
// trapezoidal rule; output symmetrized.
Eigen::MatrixXd reduced_malliavin(const FlowTriple& flow,
                                  const VectorFieldSystem& vfs);

// Full matrix of the solution as a function of the underlying Wiener process:
// <phi, M_T phi> = || (D^{1/2-H})^* A_T^* J_{0,T}^* phi ||^2_{L2}. The adjoint
// fractional derivative is assembled as a product-integration matrix of the
// compensated kernel at cell midpoints, and M_T is the resulting Gram matrix,
// so it is symmetric positive semidefinite by construction.
Eigen::MatrixXd malliavin_matrix(const FlowTriple& flow,
                                 const VectorFieldSystem& vfs, double hurst);

// First-order derivative of Z_t with respect to the Wiener process at time s:
//   c \int_s^t (r-s)^{H-3/2} (J_{s,t} V(Z_s) - J_{r,t} V(Z_r)) dr
//   + (2c/(1-2H)) (h-s)^{H-1/2} J_{s,t} V(Z_s),       h = t
// (zero for s >= t). Setting boundary_horizon_total interprets h as the full
// horizon T instead; the two variants exist for comparison (see README).
Eigen::MatrixXd malliavin_derivative_first(const FlowTriple& flow,
                                           const VectorFieldSystem& vfs, double s,
                                           double t, double hurst,
                                           bool boundary_horizon_total = false);

// Least-squares control v(r) = V(Z_r)^* (J^{-1}_{0,r})^* C_1^{-1} xi solving
// A_1 v = xi; validates the residual of the quadrature of A_1 v against xi.
SampledPath least_squares_control(const FlowTriple& flow,
                                  const VectorFieldSystem& vfs,
                                  const Eigen::VectorXd& xi,
                                  double rank_tol = 1e-8);

struct MalliavinReport {
  Eigen::MatrixXd c_matrix;
  Eigen::MatrixXd m_matrix;
  double lambda_min_c = 0.0;
  double lambda_min_m = 0.0;
  int quadrature_n = 0;
  double hurst = 0.0;
};

MalliavinReport malliavin_report(const FlowTriple& flow,
                                 const VectorFieldSystem& vfs, double hurst);

double smallest_eigenvalue(const Eigen::MatrixXd& sym);

}  // namespace roughlab
