#pragma once

#include "roughlab/controlled_path.hpp"
#include "roughlab/roughness.hpp"

namespace roughlab {

// Quantitative Doob-Meyer certificate for Z = \int A dX + \int B dt driven by
// a Holder-rough path: the sup norms of A and B are controlled by
// M * R^q * ||Z||_inf^r with R the composite regularity quantity below.
struct NorrisCertificate {
  double r_quantity = 0.0;  // 1 + 1/L_theta + ||(X,area)||_gamma + ||(A,A')||_{X,gamma} + ||B||_{C gamma}
  double z_sup = 0.0;
  double lhs = 0.0;         // ||A||_inf + ||B||_inf
  double q = 6.0;
  double r = 0.0;
  double beta = 0.0;
  double bound_value = 0.0;
  double calibration_m = 0.0;
  bool satisfied = false;
};

// sup/L2 interpolation: returns
//   2 max( T^{-1/2} ||f||_{L2}, ||f||_{L2}^{2g/(2g+1)} ||f||_gamma^{1/(2g+1)} ),
// an upper bound for ||f||_inf.
double interpolation_sup_l2(const SampledPath& f, double gamma);

// Derivative interpolation: with F(t) = \int_0^t B and the calibration
// constant M, returns
//   M ||F||_inf max( 1/T, ||F||_inf^{-1/(g+1)} ||B||_gamma^{1/(g+1)} ),
// an upper bound for ||B||_inf.
double interpolation_derivative(const SampledPath& big_f, const SampledPath& b,
                                double gamma, double calibration_m);

// Upper bound for ||Z'||_inf from the certified roughness of the driver:
//   (M ||Z||_inf / L) max( ||R^Z||_{2g}^{theta/2g} ||Z||_inf^{-theta/2g}, T^{-theta} ),
// where L is the certified lower bound from the report.
double gubinelli_derivative_bound(const ControlledPath& z,
                                  const RoughnessReport& report, double gamma,
                                  double calibration_m);

// The exponent r used by the certificate with the proof's formula at the
// chosen beta, and the cap from the remark (beta -> 1/3 limit divided out).
double norris_exponent_r(double gamma, double theta, double beta);
double norris_r_cap(double gamma, double theta);
double norris_beta(double gamma, double theta);

// Assembles the certificate for Z = \int A dX + \int B dt. The controlled
// integrand's values are read as (m/d) x d matrices (contraction integral).
// Requires theta < 2 gamma and a strictly positive certified roughness bound.
NorrisCertificate norris_bound(const ControlledPath& a_controlled,
                               const SampledPath& b_path, const RoughPath& rough,
                               const RoughnessReport& report, double gamma,
                               double calibration_m);

}  // namespace roughlab
