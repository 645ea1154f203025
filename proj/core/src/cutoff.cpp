#include "roughlab/cutoff.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace roughlab {

double lambda_cutoff(const RoughPath& rough, double beta, int q) {
  if (q < 2 || q % 2 != 0) {
    throw std::domain_error("lambda_cutoff: q must be an even integer >= 2");
  }
  if (!(beta > 0.0)) throw std::domain_error("lambda_cutoff: beta must be positive");

  const int n = rough.n_points();
  const int d = rough.dim();
  const double dt = rough.grid().spacing();

  // integrand at node pair (i < j)
  std::vector<double> h(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    const Eigen::VectorXd xi = rough.value(i);
    for (int j = i + 1; j < n; ++j) {
      const int k = j - 1;
      acc += rough.step_area(k);
      if (k > i) acc += (rough.value(k) - xi) * (rough.value(k + 1) - rough.value(k)).transpose();
      const double dx = rough.increment(i, j).norm();
      const double tilde = 0.5 * (acc - acc.transpose()).norm();  // |antisym part|
      const double sep = dt * (j - i);
      h[static_cast<size_t>(i) * n + j] =
          (std::pow(dx, 2.0 * q) + std::pow(tilde, q)) /
          std::pow(sep, 2.0 * beta * q);
    }
  }

  // composite rule over the triangle {0 <= s < t <= T}: full square cells use
  // the four-corner average, diagonal triangles the three-vertex average with
  // the analytic 0 limit on the diagonal.
  auto at = [&](int i, int j) { return h[static_cast<size_t>(i) * n + j]; };
  double integral = 0.0;
  for (int jt = 0; jt + 1 < n; ++jt) {      // t cell [t_jt, t_jt+1]
    for (int is = 0; is < jt; ++is) {       // s cell fully below the diagonal
      const double avg = 0.25 * (at(is, jt) + at(is, jt + 1) + at(is + 1, jt) +
                                 at(is + 1, jt + 1));
      integral += avg * dt * dt;
    }
    // diagonal cell: vertices (s,t) = (t_jt,t_jt), (t_jt,t_jt+1), (t_jt+1,t_jt+1)
    integral += (0.0 + at(jt, jt + 1) + 0.0) / 3.0 * 0.5 * dt * dt;
  }
  return integral;
}

double cutoff_chi(double x) {
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  const auto glue = [](double y) { return std::exp(-1.0 / y); };
  return glue(2.0 - x) / (glue(2.0 - x) + glue(x - 1.0));
}

double cutoff_weight(const RoughPath& rough, double n, double beta, int q) {
  if (!(n > 0.0)) throw std::domain_error("cutoff_weight: n must be positive");
  return cutoff_chi(lambda_cutoff(rough, beta, q) / n);
}

}  // namespace roughlab
