#include "roughlab/rough_integral.hpp"

#include <stdexcept>

namespace roughlab {

namespace {

std::shared_ptr<const RoughPath> shared_base(const ControlledPath& z,
                                             const RoughPath& rough) {
  if (z.grid() != rough.grid()) {
    throw std::domain_error("rough_integral: controlled path and driver grids differ");
  }
  if (z.noise_dim() != rough.dim()) {
    throw std::domain_error("rough_integral: noise dimension mismatch");
  }
  return std::make_shared<RoughPath>(rough);
}

}  // namespace

ControlledPath rough_integral(const ControlledPath& z, const RoughPath& rough) {
  auto base = shared_base(z, rough);
  const int n = rough.n_points();
  const int d = rough.dim();
  const int m = z.dim();

  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(n, m * d);
  std::vector<Eigen::MatrixXd> deriv(n, Eigen::MatrixXd::Zero(m * d, d));
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd zi = z.value(i);
    for (int a = 0; a < m; ++a) {
      for (int j = 0; j < d; ++j) deriv[i](a * d + j, j) = zi(a);
    }
  }
  for (int k = 0; k + 1 < n; ++k) {
    const Eigen::VectorXd dx = rough.increment(k, k + 1);
    const Eigen::MatrixXd& area = rough.step_area(k);
    const Eigen::VectorXd zk = z.value(k);
    const Eigen::MatrixXd corr = z.derivative(k) * area;  // m x d
    Eigen::RowVectorXd step(m * d);
    for (int a = 0; a < m; ++a) {
      for (int j = 0; j < d; ++j) step(a * d + j) = zk(a) * dx(j) + corr(a, j);
    }
    values.row(k + 1) = values.row(k) + step;
  }
  return ControlledPath(std::move(base), std::move(values), std::move(deriv));
}

ControlledPath rough_integral_contract(const ControlledPath& a,
                                       const RoughPath& rough) {
  auto base = shared_base(a, rough);
  const int n = rough.n_points();
  const int d = rough.dim();
  const int m = a.dim();
  if (m % d != 0) {
    throw std::domain_error(
        "rough_integral_contract: integrand not matrix-shaped for this driver");
  }
  const int p = m / d;

  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(n, p);
  std::vector<Eigen::MatrixXd> deriv(n, Eigen::MatrixXd::Zero(p, d));
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd ai = a.value(i);
    for (int r = 0; r < p; ++r) {
      for (int c = 0; c < d; ++c) deriv[i](r, c) = ai(r * d + c);
    }
  }
  for (int k = 0; k + 1 < n; ++k) {
    const Eigen::VectorXd dx = rough.increment(k, k + 1);
    const Eigen::MatrixXd& area = rough.step_area(k);
    const Eigen::MatrixXd& aprime = a.derivative(k);  // (p*d) x d
    Eigen::RowVectorXd step = Eigen::RowVectorXd::Zero(p);
    for (int r = 0; r < p; ++r) {
      double acc = deriv[k].row(r).dot(dx);
      for (int i = 0; i < d; ++i) {
        for (int kk = 0; kk < d; ++kk) {
          acc += aprime(r * d + i, kk) * area(kk, i);
        }
      }
      step(r) = acc;
    }
    values.row(k + 1) = values.row(k) + step;
  }
  return ControlledPath(std::move(base), std::move(values), std::move(deriv));
}

SampledPath time_integral(const SampledPath& b) {
  const int n = b.n_points();
  const double dt = b.grid().spacing();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, b.dim());
  for (int k = 0; k + 1 < n; ++k) {
    out.row(k + 1) = out.row(k) + 0.5 * dt * (b.values().row(k) + b.values().row(k + 1));
  }
  return SampledPath(b.grid(), std::move(out));
}

}  // namespace roughlab
