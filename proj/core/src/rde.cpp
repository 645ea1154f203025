#include "roughlab/rde.hpp"

#include <cmath>
#include <stdexcept>

#include "roughlab/errors.hpp"

namespace roughlab {

double FlowTriple::inverse_defect() const {
  const int n = dim_state();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  double worst = 0.0;
  for (size_t i = 0; i < jac.size(); ++i) {
    worst = std::max(worst, (jac[i] * jac_inv[i] - id).norm());
  }
  return worst;
}

Eigen::MatrixXd FlowTriple::transition(int i_s, int i_t) const {
  return jac[i_t] * jac_inv[i_s];
}

namespace {

void check_dims(const VectorFieldSystem& vfs, const Eigen::VectorXd& z0,
                const RoughPath& rough) {
  if (vfs.dim_state() != z0.size()) {
    throw std::domain_error("solve_rde: initial condition dimension mismatch");
  }
  if (vfs.dim_noise() != rough.dim()) {
    throw std::domain_error("solve_rde: driver dimension mismatch");
  }
}

void check_finite(const Eigen::VectorXd& z, double threshold, double t) {
  if (!z.allFinite() || z.norm() > threshold) {
    throw ExplosionError("solve_rde: solution explosion at t=" + std::to_string(t), t);
  }
}

}  // namespace

ControlledPath solve_rde(const VectorFieldSystem& vfs, const Eigen::VectorXd& z0,
                         const RoughPath& rough, const SolveOptions& opts) {
  check_dims(vfs, z0, rough);
  const int n = rough.n_points();
  const int d = rough.dim();
  const int ns = vfs.dim_state();
  const double dt = rough.grid().spacing();

  Eigen::MatrixXd values(n, ns);
  std::vector<Eigen::MatrixXd> deriv(n);
  Eigen::VectorXd z = z0;
  values.row(0) = z.transpose();
  deriv[0] = vfs.driving_matrix(z);

  for (int k = 0; k + 1 < n; ++k) {
    const Eigen::VectorXd dx = rough.increment(k, k + 1);
    const Eigen::MatrixXd& area = rough.step_area(k);
    const Eigen::MatrixXd v = (k == 0) ? deriv[0] : vfs.driving_matrix(z);

    Eigen::VectorXd step = vfs.drift()(z) * dt + v * dx;
    for (int j = 0; j < d; ++j) {
      const Eigen::MatrixXd dvj = vfs.driving(j).jacobian(z);
      for (int i = 0; i < d; ++i) step += area(i, j) * (dvj * v.col(i));
    }
    z += step;
    check_finite(z, opts.explosion_threshold, rough.grid().node(k + 1));
    values.row(k + 1) = z.transpose();
    deriv[k + 1] = vfs.driving_matrix(z);
  }
  return ControlledPath(std::make_shared<RoughPath>(rough), std::move(values),
                        std::move(deriv));
}

FlowTriple jacobian_flow(const VectorFieldSystem& vfs, const Eigen::VectorXd& z0,
                         const RoughPath& rough, const SolveOptions& opts) {
  check_dims(vfs, z0, rough);
  const int n = rough.n_points();
  const int d = rough.dim();
  const int ns = vfs.dim_state();
  const double dt = rough.grid().spacing();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(ns, ns);

  FlowTriple flow{rough.grid(), {}, {}, {}};
  flow.z.reserve(n);
  flow.jac.reserve(n);
  flow.jac_inv.reserve(n);

  Eigen::VectorXd z = z0;
  Eigen::MatrixXd jac = id;
  Eigen::MatrixXd inv = id;
  flow.z.push_back(z);
  flow.jac.push_back(jac);
  flow.jac_inv.push_back(inv);

  for (int k = 0; k + 1 < n; ++k) {
    const Eigen::VectorXd dx = rough.increment(k, k + 1);
    const Eigen::MatrixXd& area = rough.step_area(k);

    const Eigen::MatrixXd v = vfs.driving_matrix(z);           // n x d
    const Eigen::MatrixXd dv0 = vfs.drift().jacobian(z);       // n x n
    std::vector<Eigen::MatrixXd> dv(d);
    std::vector<std::vector<Eigen::MatrixXd>> d2v(d);
    for (int j = 0; j < d; ++j) {
      dv[j] = vfs.driving(j).jacobian(z);
      d2v[j] = vfs.driving(j).hessian(z);
    }
    // D^2 V_j contracted with the step direction V_i: matrix with entries
    // (sum_m Hess_j^k(., m) V_i^m)_{k,.}
    auto hess_dot = [&](int j, const Eigen::VectorXd& w) {
      Eigen::MatrixXd out(ns, ns);
      for (int kk = 0; kk < ns; ++kk) out.row(kk) = (d2v[j][kk] * w).transpose();
      return out;
    };

    // state step
    Eigen::VectorXd zstep = vfs.drift()(z) * dt + v * dx;
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) zstep += area(i, j) * (dv[j] * v.col(i));
    }

    // Jacobian step: first order DV_j J dX^j, second order
    // (D^2V_j[V_i] + DV_j DV_i) J area^{ij}
    Eigen::MatrixXd jstep = dv0 * jac * dt;
    Eigen::MatrixXd istep = -inv * dv0 * dt;
    for (int j = 0; j < d; ++j) {
      jstep += (dv[j] * jac) * dx(j);
      istep -= (inv * dv[j]) * dx(j);
      for (int i = 0; i < d; ++i) {
        const Eigen::MatrixXd hji = hess_dot(j, v.col(i));
        jstep += area(i, j) * ((hji + dv[j] * dv[i]) * jac);
        istep += area(i, j) * (inv * (dv[i] * dv[j] - hji));
      }
    }

    z += zstep;
    jac += jstep;
    inv += istep;
    const double t = rough.grid().node(k + 1);
    check_finite(z, opts.explosion_threshold, t);
    if (!jac.allFinite() || !inv.allFinite()) {
      throw ExplosionError("jacobian_flow: Jacobian explosion at t=" + std::to_string(t), t);
    }
    flow.z.push_back(z);
    flow.jac.push_back(jac);
    flow.jac_inv.push_back(inv);
  }

  const double defect = flow.inverse_defect();
  if (!(defect <= opts.tol_jac)) {
    throw NumericalError("jacobian_flow: J J^{-1} defect " + std::to_string(defect) +
                         " exceeds tol_jac " + std::to_string(opts.tol_jac));
  }
  return flow;
}

}  // namespace roughlab
