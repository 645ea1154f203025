#include "roughlab/sampled_path.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace roughlab {

SampledPath::SampledPath(Grid grid, Eigen::MatrixXd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.rows() != grid_.n_points()) {
    throw std::invalid_argument("SampledPath: value rows do not match grid nodes");
  }
  if (values_.cols() < 1) {
    throw std::invalid_argument("SampledPath: need at least one component");
  }
}

SampledPath SampledPath::zero(const Grid& grid, int dim) {
  return SampledPath(grid, Eigen::MatrixXd::Zero(grid.n_points(), dim));
}

SampledPath SampledPath::sample(const Grid& grid,
                                const std::function<Eigen::VectorXd(double)>& f) {
  Eigen::VectorXd first = f(grid.node(0));
  Eigen::MatrixXd v(grid.n_points(), first.size());
  v.row(0) = first.transpose();
  for (int i = 1; i < grid.n_points(); ++i) v.row(i) = f(grid.node(i)).transpose();
  return SampledPath(grid, std::move(v));
}

SampledPath SampledPath::sample_scalar(const Grid& grid,
                                       const std::function<double(double)>& f) {
  Eigen::MatrixXd v(grid.n_points(), 1);
  for (int i = 0; i < grid.n_points(); ++i) v(i, 0) = f(grid.node(i));
  return SampledPath(grid, std::move(v));
}

Eigen::VectorXd SampledPath::increment(int i, int j) const {
  if (i < 0 || i >= n_points() || j < 0 || j >= n_points()) {
    throw std::out_of_range("SampledPath::increment: node out of grid");
  }
  return (values_.row(j) - values_.row(i)).transpose();
}

double SampledPath::holder_seminorm(double gamma) const {
  if (!(gamma > 0.0) || gamma > 1.0) {
    throw std::domain_error("holder_seminorm: gamma must lie in (0, 1]");
  }
  if (n_points() < 2) throw std::domain_error("holder_seminorm: fewer than 2 nodes");
  const double dt = grid_.spacing();
  double best = 0.0;
  for (int i = 0; i + 1 < n_points(); ++i) {
    for (int j = i + 1; j < n_points(); ++j) {
      const double num = (values_.row(j) - values_.row(i)).norm();
      const double den = std::pow(dt * (j - i), gamma);
      best = std::max(best, num / den);
    }
  }
  return best;
}

double SampledPath::sup_norm() const {
  double best = 0.0;
  for (int i = 0; i < n_points(); ++i) best = std::max(best, values_.row(i).norm());
  return best;
}

double SampledPath::l2_norm() const {
  const double dt = grid_.spacing();
  double acc = 0.0;
  for (int i = 0; i < n_points(); ++i) {
    const double w = (i == 0 || i == n_points() - 1) ? 0.5 : 1.0;
    acc += w * values_.row(i).squaredNorm();
  }
  return std::sqrt(acc * dt);
}

double SampledPath::variation_holder_norm(double gamma) const {
  const int n = n_points();
  const double dt = grid_.spacing();
  // cumulative 1-variation along the polygonal path
  std::vector<double> var(n, 0.0);
  for (int i = 1; i < n; ++i) {
    var[i] = var[i - 1] + (values_.row(i) - values_.row(i - 1)).norm();
  }
  double best = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      best = std::max(best, (var[j] - var[i]) / std::pow(dt * (j - i), gamma));
    }
  }
  return best;
}

SampledPath SampledPath::restrict(int i0, int i1) const {
  return SampledPath(grid_.subgrid(i0, i1), values_.middleRows(i0, i1 - i0 + 1));
}

SampledPath SampledPath::operator+(const SampledPath& other) const {
  if (grid_ != other.grid_) throw std::domain_error("SampledPath: grid mismatch");
  return SampledPath(grid_, values_ + other.values_);
}

SampledPath SampledPath::operator-(const SampledPath& other) const {
  if (grid_ != other.grid_) throw std::domain_error("SampledPath: grid mismatch");
  return SampledPath(grid_, values_ - other.values_);
}

SampledPath SampledPath::scaled(double a) const {
  return SampledPath(grid_, values_ * a);
}

}  // namespace roughlab
