#pragma once

#include <functional>

#include <Eigen/Dense>

#include "roughlab/grid.hpp"

namespace roughlab {

// A path sampled on a uniform grid, one row per node. Between nodes, every
// operation in this library treats the path as piecewise linear.
class SampledPath {
public:
  SampledPath(Grid grid, Eigen::MatrixXd values);

  // All-zero path of the given dimension.
  static SampledPath zero(const Grid& grid, int dim);

  // Samples a callable t -> VectorXd (or double for dim 1) at the nodes.
  static SampledPath sample(const Grid& grid,
                            const std::function<Eigen::VectorXd(double)>& f);
  static SampledPath sample_scalar(const Grid& grid,
                                   const std::function<double(double)>& f);

  const Grid& grid() const { return grid_; }
  int dim() const { return static_cast<int>(values_.cols()); }
  int n_points() const { return grid_.n_points(); }

  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::VectorXd value(int i) const { return values_.row(i).transpose(); }
  double scalar(int i) const { return values_(i, 0); }

  // X_t - X_s for nodes s=i, t=j (antisymmetric in (i,j)).
  Eigen::VectorXd increment(int i, int j) const;

  // sup over node pairs of |delta X_{st}| / |t-s|^gamma, Euclidean magnitude.
  double holder_seminorm(double gamma) const;

  double sup_norm() const;

  // Trapezoidal L2 norm over the grid.
  double l2_norm() const;

  // sup over node pairs s<t of (sum of |per-step increments| on [s,t]) / |t-s|^gamma;
  // the 1-variation-against-Holder modulus used by the translation bound.
  double variation_holder_norm(double gamma) const;

  SampledPath restrict(int i0, int i1) const;

  // Node-wise algebra (shared grid required).
  SampledPath operator+(const SampledPath& other) const;
  SampledPath operator-(const SampledPath& other) const;
  SampledPath scaled(double a) const;

private:
  Grid grid_;
  Eigen::MatrixXd values_;  // n_points x dim
};

}  // namespace roughlab
