#include "roughlab/rough_path.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace roughlab {

RoughPath::RoughPath(SampledPath path, std::vector<Eigen::MatrixXd> step_areas,
                     double gamma)
    : path_(std::move(path)), step_areas_(std::move(step_areas)), gamma_(gamma) {
  if (static_cast<int>(step_areas_.size()) != path_.grid().n_steps()) {
    throw std::invalid_argument("RoughPath: need one area tensor per grid step");
  }
  const int d = path_.dim();
  for (const auto& a : step_areas_) {
    if (a.rows() != d || a.cols() != d) {
      throw std::invalid_argument("RoughPath: step area must be d x d");
    }
  }
  if (!(gamma_ > 1.0 / 3.0) || gamma_ > 0.5) {
    throw std::invalid_argument("RoughPath: gamma must lie in (1/3, 1/2], got " +
                                std::to_string(gamma_));
  }
}

Eigen::MatrixXd RoughPath::area(int i, int j) const {
  if (i < 0 || j >= n_points() || i > j) {
    throw std::out_of_range("RoughPath::area: bad node pair");
  }
  const int d = dim();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
  if (i == j) return acc;
  Eigen::VectorXd xi = value(i);
  for (int k = i; k < j; ++k) {
    // area(i,k+1) = area(i,k) + step(k) + dX_{i,k} dX_{k,k+1}^T
    acc += step_areas_[k];
    if (k > i) {
      acc += (value(k) - xi) * (value(k + 1) - value(k)).transpose();
    }
  }
  return acc;
}

double RoughPath::area_norm(double two_gamma) const {
  const int n = n_points();
  const int d = dim();
  const double dt = grid().spacing();
  double best = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    const Eigen::VectorXd xi = value(i);
    for (int j = i + 1; j < n; ++j) {
      const int k = j - 1;
      acc += step_areas_[k];
      if (k > i) acc += (value(k) - xi) * (value(k + 1) - value(k)).transpose();
      best = std::max(best, acc.norm() / std::pow(dt * (j - i), two_gamma));
    }
  }
  return best;
}

double RoughPath::rough_norm(double gamma) const {
  return path_.holder_seminorm(gamma) + area_norm(2.0 * gamma);
}

double RoughPath::chen_defect() const {
  const int n = n_points();
  const int d = dim();
  // Materialize all pair tensors once; the triple scan is then cheap.
  std::vector<Eigen::MatrixXd> full(static_cast<size_t>(n) * n,
                                    Eigen::MatrixXd::Zero(d, d));
  auto at = [&](int i, int j) -> Eigen::MatrixXd& {
    return full[static_cast<size_t>(i) * n + j];
  };
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd xi = value(i);
    for (int j = i + 1; j < n; ++j) {
      const int k = j - 1;
      at(i, j) = at(i, k) + step_areas_[k];
      if (k > i) at(i, j) += (value(k) - xi) * (value(k + 1) - value(k)).transpose();
    }
  }
  double worst = 0.0;
  for (int s = 0; s < n; ++s) {
    for (int u = s + 1; u < n; ++u) {
      const Eigen::VectorXd dsu = increment(s, u);
      for (int t = u + 1; t < n; ++t) {
        const Eigen::MatrixXd defect =
            at(s, t) - at(u, t) - at(s, u) - dsu * increment(u, t).transpose();
        worst = std::max(worst, defect.norm());
      }
    }
  }
  return worst;
}

double RoughPath::symmetry_defect() const {
  const int n = n_points();
  const int d = dim();
  double worst = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    const Eigen::VectorXd xi = value(i);
    for (int j = i + 1; j < n; ++j) {
      const int k = j - 1;
      acc += step_areas_[k];
      if (k > i) acc += (value(k) - xi) * (value(k + 1) - value(k)).transpose();
      const Eigen::VectorXd dx = increment(i, j);
      const Eigen::MatrixXd sym = 0.5 * (acc + acc.transpose());
      worst = std::max(worst, (sym - 0.5 * dx * dx.transpose()).norm());
    }
  }
  return worst;
}

RoughPath RoughPath::restrict(int i0, int i1) const {
  std::vector<Eigen::MatrixXd> areas(step_areas_.begin() + i0,
                                     step_areas_.begin() + i1);
  return RoughPath(path_.restrict(i0, i1), std::move(areas), gamma_);
}

RoughPath RoughPath::scaled(double a) const {
  std::vector<Eigen::MatrixXd> areas = step_areas_;
  for (auto& m : areas) m *= a * a;
  return RoughPath(path_.scaled(a), std::move(areas), gamma_);
}

RoughPath lift_smooth(const SampledPath& path, double gamma) {
  const int n = path.n_points();
  std::vector<Eigen::MatrixXd> areas;
  areas.reserve(n - 1);
  for (int k = 0; k + 1 < n; ++k) {
    const Eigen::VectorXd dx = path.increment(k, k + 1);
    areas.push_back(0.5 * dx * dx.transpose());
  }
  return RoughPath(path, std::move(areas), gamma);
}

RoughPath lift_refined(const SampledPath& fine, int factor, double gamma) {
  if (factor < 1) throw std::domain_error("lift_refined: factor must be >= 1");
  const int nf = fine.n_points();
  if ((nf - 1) % factor != 0) {
    throw std::domain_error("lift_refined: fine grid not divisible by factor");
  }
  const int n = (nf - 1) / factor + 1;
  const int d = fine.dim();
  const Grid coarse(fine.grid().t0(), fine.grid().t1(), n);

  Eigen::MatrixXd values(n, d);
  for (int i = 0; i < n; ++i) values.row(i) = fine.values().row(i * factor);

  std::vector<Eigen::MatrixXd> areas;
  areas.reserve(n - 1);
  for (int k = 0; k + 1 < n; ++k) {
    const int base = k * factor;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    const Eigen::VectorXd x0 = fine.value(base);
    for (int s = 0; s < factor; ++s) {
      const Eigen::VectorXd dx = fine.increment(base + s, base + s + 1);
      acc += 0.5 * dx * dx.transpose();
      if (s > 0) acc += (fine.value(base + s) - x0) * dx.transpose();
    }
    areas.push_back(std::move(acc));
  }
  return RoughPath(SampledPath(coarse, std::move(values)), std::move(areas), gamma);
}

RoughPath translate(const RoughPath& rough, const SampledPath& h) {
  if (rough.grid() != h.grid() || rough.dim() != h.dim()) {
    throw std::domain_error("translate: h must share the rough path's grid and dim");
  }
  const int n = rough.n_points();
  SampledPath y(rough.grid(), rough.path().values() + h.values());
  std::vector<Eigen::MatrixXd> areas;
  areas.reserve(n - 1);
  for (int k = 0; k + 1 < n; ++k) {
    const Eigen::VectorXd dx = rough.increment(k, k + 1);
    const Eigen::VectorXd dh = h.increment(k, k + 1);
    // Per-step Riemann-Stieltjes corrections for piecewise-linear X and h.
    areas.push_back(rough.step_area(k) + 0.5 * dx * dh.transpose() +
                    0.5 * dh * dx.transpose() + 0.5 * dh * dh.transpose());
  }
  return RoughPath(std::move(y), std::move(areas), rough.gamma());
}

}  // namespace roughlab
