#pragma once

#include <vector>

#include <Eigen/Dense>

namespace roughlab {

// Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|.
double ks_distance(std::vector<double> a, std::vector<double> b);

// Critical value of the two-sample KS statistic at significance alpha.
double ks_critical_value(double alpha, std::size_t n_a, std::size_t n_b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // unbiased

}  // namespace roughlab
