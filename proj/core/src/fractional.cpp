#include "roughlab/fractional.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace roughlab {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::domain_error("fractional operator: alpha must lie in (0,1)");
  }
}

// Weights of the product-integration rule on a uniform grid. For target node
// i and source cell k steps away (k = i - j, cell [s_j, s_{j+1}]), the exact
// cell integral of (t_i - s)^{alpha-1} times the linear interpolant of f is
//   f_j * wl[k] + f_{j+1} * wr[k].
struct CellWeights {
  std::vector<double> wl;
  std::vector<double> wr;
};

CellWeights product_weights(double alpha, double dt, int n_steps) {
  CellWeights w;
  w.wl.resize(n_steps + 1, 0.0);
  w.wr.resize(n_steps + 1, 0.0);
  for (int k = 1; k <= n_steps; ++k) {
    const double b = k * dt;        // t_i - s_j
    const double a = (k - 1) * dt;  // t_i - s_{j+1}
    const double i0 = (std::pow(b, alpha) - std::pow(a, alpha)) / alpha;
    const double i1 =
        (std::pow(b, alpha + 1.0) - std::pow(a, alpha + 1.0)) / (alpha + 1.0);
    const double ramp = (b * i0 - i1) / dt;  // weight of (f_{j+1} - f_j)
    w.wl[k] = i0 - ramp;
    w.wr[k] = ramp;
  }
  return w;
}

Eigen::MatrixXd apply_product_integral(const Eigen::MatrixXd& f, double alpha,
                                       double dt) {
  const int n = static_cast<int>(f.rows());
  const CellWeights w = product_weights(alpha, dt, n - 1);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, f.cols());
  const double inv_gamma = 1.0 / std::tgamma(alpha);
  for (int i = 1; i < n; ++i) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(f.cols());
    for (int j = 0; j < i; ++j) {
      const int k = i - j;
      acc += w.wl[k] * f.row(j) + w.wr[k] * f.row(j + 1);
    }
    out.row(i) = inv_gamma * acc;
  }
  return out;
}

}  // namespace

SampledPath frac_integral(const SampledPath& f, double alpha) {
  check_alpha(alpha);
  return SampledPath(f.grid(),
                     apply_product_integral(f.values(), alpha, f.grid().spacing()));
}

SampledPath frac_derivative(const SampledPath& f, double alpha) {
  check_alpha(alpha);
  const double dt = f.grid().spacing();
  const Eigen::MatrixXd primitive =
      apply_product_integral(f.values(), 1.0 - alpha, dt);
  const int n = static_cast<int>(primitive.rows());
  Eigen::MatrixXd out(n, primitive.cols());
  out.row(0) = (-3.0 * primitive.row(0) + 4.0 * primitive.row(1) -
                primitive.row(2)) /
               (2.0 * dt);
  for (int i = 1; i + 1 < n; ++i) {
    out.row(i) = (primitive.row(i + 1) - primitive.row(i - 1)) / (2.0 * dt);
  }
  out.row(n - 1) = (3.0 * primitive.row(n - 1) - 4.0 * primitive.row(n - 2) +
                    primitive.row(n - 3)) /
                   (2.0 * dt);
  return SampledPath(f.grid(), std::move(out));
}

}  // namespace roughlab
