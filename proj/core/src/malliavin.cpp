#include "roughlab/malliavin.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "roughlab/errors.hpp"
#include "roughlab/fbm_conditional.hpp"

namespace roughlab {

double malliavin_c(double hurst) { return alpha_h(hurst) * (0.5 - hurst); }

double smallest_eigenvalue(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Eigen::MatrixXd reduced_malliavin(const FlowTriple& flow,
                                  const VectorFieldSystem& vfs) {
  const int n = flow.dim_state();
  const int nodes = static_cast<int>(flow.z.size());
  const double dt = flow.grid.spacing();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < nodes; ++i) {
    const Eigen::MatrixXd f = flow.jac_inv[i] * vfs.driving_matrix(flow.z[i]);
    const double w = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
    acc += w * f * f.transpose();
  }
  acc *= dt;
  return 0.5 * (acc + acc.transpose());
}

namespace {

// Compensated-kernel product-integration matrix: row p evaluates
//   (L f)(sigma_p) = c [ \int_{sigma_p}^{T} (r-sigma_p)^{H-3/2} (f(sigma_p)-f(r)) dr
//                        + (T-sigma_p)^{H-1/2} / (1/2-H) * f(sigma_p) ]
// at the cell midpoint sigma_p, for piecewise-linear f given by node values.
// Rows: n-1 midpoints; cols: n nodes.
Eigen::MatrixXd compensated_kernel_matrix(const Grid& grid, double hurst) {
  const int n = grid.n_points();
  const double dt = grid.spacing();
  const double mu = hurst - 0.5;  // kernel exponent + 1
  const double c = malliavin_c(hurst);
  const double t_end = grid.t1();

  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n - 1, n);
  for (int p = 0; p + 1 < n; ++p) {
    const double sigma = grid.node(p) + 0.5 * dt;
    // half cell [sigma, node(p+1)]: f(sigma) - f(r) = -(r - sigma) * slope_p
    {
      const double b = 0.5 * dt;
      const double i1 = std::pow(b, mu + 1.0) / (mu + 1.0);
      L(p, p) += i1 / dt;       // slope_p = (f_{p+1} - f_p)/dt
      L(p, p + 1) -= i1 / dt;
    }
    // f(sigma) couples through the i0 weights of every later cell
    const double f_mid_l = 0.5, f_mid_r = 0.5;  // f(sigma) = (f_p + f_{p+1})/2
    for (int j = p + 1; j + 1 < n; ++j) {
      const double a = grid.node(j) - sigma;
      const double b = a + dt;
      const double i0 = (std::pow(b, mu) - std::pow(a, mu)) / mu;
      const double i1 =
          (std::pow(b, mu + 1.0) - std::pow(a, mu + 1.0)) / (mu + 1.0) - a * i0;
      // (f(sigma) - f_j) i0 - slope_j i1
      L(p, p) += f_mid_l * i0;
      L(p, p + 1) += f_mid_r * i0;
      L(p, j) += -i0 + i1 / dt;
      L(p, j + 1) += -i1 / dt;
    }
    // boundary term
    const double bweight = std::pow(t_end - sigma, mu) / (0.5 - hurst);
    L(p, p) += f_mid_l * bweight;
    L(p, p + 1) += f_mid_r * bweight;
  }
  return c * L;
}

}  // namespace

Eigen::MatrixXd malliavin_matrix(const FlowTriple& flow,
                                 const VectorFieldSystem& vfs, double hurst) {
  if (!(hurst > 1.0 / 3.0) || !(hurst < 0.5)) {
    throw std::domain_error("malliavin_matrix: hurst must lie in (1/3, 1/2)");
  }
  const int n = flow.dim_state();
  const int d = vfs.dim_noise();
  const int nodes = static_cast<int>(flow.z.size());
  const double dt = flow.grid.spacing();

  // F columns: for basis vector e_a, the function s -> V(Z_s)^* (J^{-1}_s)^*
  // J_T^* e_a, componentwise in the d noise coordinates.
  const Eigen::MatrixXd j_end = flow.jac.back();
  std::vector<Eigen::MatrixXd> f(d, Eigen::MatrixXd(nodes, n));
  for (int i = 0; i < nodes; ++i) {
    const Eigen::MatrixXd block =
        vfs.driving_matrix(flow.z[i]).transpose() * flow.jac_inv[i].transpose() *
        j_end.transpose();  // d x n
    for (int c = 0; c < d; ++c) f[c].row(i) = block.row(c);
  }

  const Eigen::MatrixXd L = compensated_kernel_matrix(flow.grid, hurst);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int c = 0; c < d; ++c) {
    const Eigen::MatrixXd g = L * f[c];  // (nodes-1) x n
    m += dt * g.transpose() * g;         // midpoint-rule Gram block
  }
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd malliavin_derivative_first(const FlowTriple& flow,
                                           const VectorFieldSystem& vfs, double s,
                                           double t, double hurst,
                                           bool boundary_horizon_total) {
  const int n = flow.dim_state();
  const int d = vfs.dim_noise();
  if (s >= t) return Eigen::MatrixXd::Zero(n, d);

  const int is = flow.grid.index_of(s);
  const int it = flow.grid.index_of(t);
  const double dt = flow.grid.spacing();
  const double mu = hurst - 0.5;
  const double c = malliavin_c(hurst);

  // F(r) = J_{r,t} V(Z_r) on the nodes of [s, t].
  const Eigen::MatrixXd j_t = flow.jac[it];
  std::vector<Eigen::MatrixXd> f(it - is + 1);
  for (int i = is; i <= it; ++i) {
    f[i - is] = j_t * flow.jac_inv[i] * vfs.driving_matrix(flow.z[i]);
  }

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, d);
  for (int j = is; j < it; ++j) {
    const double a = (j - is) * dt;
    const double b = a + dt;
    const Eigen::MatrixXd slope = (f[j - is + 1] - f[j - is]) / dt;
    if (j == is) {
      // F(s) - F(r) = -(r-s) slope on the first cell
      acc -= slope * (std::pow(b, mu + 1.0) / (mu + 1.0));
      continue;
    }
    const double i0 = (std::pow(b, mu) - std::pow(a, mu)) / mu;
    const double i1 =
        (std::pow(b, mu + 1.0) - std::pow(a, mu + 1.0)) / (mu + 1.0) - a * i0;
    acc += (f[0] - f[j - is]) * i0 - slope * i1;
  }

  const double horizon = boundary_horizon_total ? flow.grid.t1() : t;
  const double boundary = std::pow(horizon - s, mu) * 2.0 / (1.0 - 2.0 * hurst);
  return c * (acc + boundary * f[0]);
}

SampledPath least_squares_control(const FlowTriple& flow,
                                  const VectorFieldSystem& vfs,
                                  const Eigen::VectorXd& xi, double rank_tol) {
  const int nodes = static_cast<int>(flow.z.size());
  const int d = vfs.dim_noise();
  const double dt = flow.grid.spacing();

  const Eigen::MatrixXd c1 = reduced_malliavin(flow, vfs);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c1);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > rank_tol * std::max(hi, 1.0))) {
    throw HypothesisError("least_squares_control: C_1 is numerically singular "
                          "(system not controllable along this trajectory)");
  }
  const Eigen::VectorXd c1inv_xi = c1.ldlt().solve(xi);

  Eigen::MatrixXd values(nodes, d);
  for (int i = 0; i < nodes; ++i) {
    values.row(i) = (vfs.driving_matrix(flow.z[i]).transpose() *
                     flow.jac_inv[i].transpose() * c1inv_xi)
                        .transpose();
  }
  SampledPath v(flow.grid, std::move(values));

  // Residual of A_1 v against xi under the same trapezoidal quadrature.
  Eigen::VectorXd av = Eigen::VectorXd::Zero(flow.dim_state());
  for (int i = 0; i < nodes; ++i) {
    const double w = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
    av += w * flow.jac_inv[i] * vfs.driving_matrix(flow.z[i]) *
          v.value(i);
  }
  av *= dt;
  const double rel = (av - xi).norm() / std::max(xi.norm(), 1e-300);
  if (xi.norm() > 0.0 && rel > 1e-8) {
    throw NumericalError("least_squares_control: residual " + std::to_string(rel) +
                         " exceeds 1e-8");
  }
  return v;
}

MalliavinReport malliavin_report(const FlowTriple& flow,
                                 const VectorFieldSystem& vfs, double hurst) {
  MalliavinReport report;
  report.c_matrix = reduced_malliavin(flow, vfs);
  report.m_matrix = malliavin_matrix(flow, vfs, hurst);
  report.lambda_min_c = smallest_eigenvalue(report.c_matrix);
  report.lambda_min_m = smallest_eigenvalue(report.m_matrix);
  report.quadrature_n = static_cast<int>(flow.z.size());
  report.hurst = hurst;
  return report;
}

}  // namespace roughlab
