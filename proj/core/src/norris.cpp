#include "roughlab/norris.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roughlab/errors.hpp"
#include "roughlab/rough_integral.hpp"

namespace roughlab {

double interpolation_sup_l2(const SampledPath& f, double gamma) {
  const double t_len = f.grid().length();
  const double l2 = f.l2_norm();
  const double hol = f.holder_seminorm(gamma);
  const double a = l2 / std::sqrt(t_len);
  const double b = std::pow(l2, 2.0 * gamma / (2.0 * gamma + 1.0)) *
                   std::pow(hol, 1.0 / (2.0 * gamma + 1.0));
  return 2.0 * std::max(a, b);
}

double interpolation_derivative(const SampledPath& big_f, const SampledPath& b,
                                double gamma, double calibration_m) {
  if (big_f.value(0).norm() > 1e-12) {
    throw std::domain_error("interpolation_derivative: F must start at 0");
  }
  const double t_len = big_f.grid().length();
  const double f_sup = big_f.sup_norm();
  if (f_sup == 0.0) return 0.0;
  const double b_hol = b.holder_seminorm(gamma);
  const double second = std::pow(f_sup, -1.0 / (gamma + 1.0)) *
                        std::pow(b_hol, 1.0 / (gamma + 1.0));
  return calibration_m * f_sup * std::max(1.0 / t_len, second);
}

double gubinelli_derivative_bound(const ControlledPath& z,
                                  const RoughnessReport& report, double gamma,
                                  double calibration_m) {
  if (!(report.l_theta_lower > 0.0)) {
    throw HypothesisError(
        "gubinelli_derivative_bound: driver not certified rough (L bound is 0)");
  }
  const double z_sup = z.value_path().sup_norm();
  if (z_sup == 0.0) return 0.0;
  const double theta = report.theta;
  const double t_len = z.grid().length();
  const double rem = z.remainder_norm(2.0 * gamma);
  const double e = theta / (2.0 * gamma);
  const double first = std::pow(rem, e) * std::pow(z_sup, -e);
  return calibration_m * z_sup / report.l_theta_lower *
         std::max(first, std::pow(t_len, -theta));
}

double norris_exponent_r(double gamma, double theta, double beta) {
  const double base = 1.0 - theta / (2.0 * gamma);
  return base * base * (1.0 - beta / gamma) * gamma / (1.0 + gamma);
}

double norris_r_cap(double gamma, double theta) {
  const double num = (2.0 * gamma - theta) * (2.0 * gamma - theta) *
                     (3.0 * gamma - 1.0);
  return num / (4.0 * gamma * gamma * (1.0 + gamma));
}

double norris_beta(double gamma, double theta) {
  constexpr double tiny = 1e-6;
  double beta = std::max((1.0 / 3.0 + gamma) / 2.0, theta / 2.0 + gamma / 2.0 + tiny);
  beta = std::min(beta, gamma - tiny);
  beta = std::max(beta, 1.0 / 3.0 + tiny);
  if (!(beta > 1.0 / 3.0) || !(beta < gamma) || !(2.0 * beta > theta)) {
    throw HypothesisError("norris_bound: no admissible beta in (1/3, gamma) with 2 beta > theta");
  }
  return beta;
}

NorrisCertificate norris_bound(const ControlledPath& a_controlled,
                               const SampledPath& b_path, const RoughPath& rough,
                               const RoughnessReport& report, double gamma,
                               double calibration_m) {
  const double theta = report.theta;
  if (!(theta < 2.0 * gamma)) {
    throw HypothesisError("norris_bound: requires theta < 2 gamma");
  }
  if (!(report.l_theta_lower > 0.0)) {
    throw HypothesisError("norris_bound: driver not certified rough (L bound is 0)");
  }

  NorrisCertificate cert;
  cert.beta = norris_beta(gamma, theta);
  cert.q = 6.0;
  cert.r = norris_exponent_r(gamma, theta, cert.beta);
  cert.calibration_m = calibration_m;

  // Z = \int A dX + \int B dt
  const ControlledPath integral = rough_integral_contract(a_controlled, rough);
  const SampledPath drift = time_integral(b_path);
  const SampledPath z = integral.value_path() + drift;

  cert.z_sup = z.sup_norm();
  cert.lhs = a_controlled.value_path().sup_norm() + b_path.sup_norm();
  cert.r_quantity = 1.0 + 1.0 / report.l_theta_lower + rough.rough_norm(gamma) +
                    a_controlled.controlled_norm(gamma) +
                    b_path.sup_norm() + b_path.holder_seminorm(gamma);
  cert.bound_value = calibration_m * std::pow(cert.r_quantity, cert.q) *
                     std::pow(cert.z_sup, cert.r);
  cert.satisfied = cert.lhs <= cert.bound_value;
  return cert;
}

}  // namespace roughlab
