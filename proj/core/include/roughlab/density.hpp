#pragma once

#include <vector>

#include <Eigen/Dense>

namespace roughlab {

// Product-Gaussian kernel density estimate on a rectangular evaluation grid.
struct DensityEstimate {
  Eigen::MatrixXd samples;              // n_samples x dim
  Eigen::VectorXd bandwidth;            // per-dimension
  std::vector<Eigen::VectorXd> grid_axes;
  std::vector<double> values;           // row-major over the axes
  double grid_integral = 0.0;           // Riemann sum over the box

  double value_at(const Eigen::VectorXd& x) const;
};

// Silverman's rule per dimension.
Eigen::VectorXd silverman_bandwidth(const Eigen::MatrixXd& samples);

// KDE with optional explicit bandwidth; requires >= 100 samples and a
// nondegenerate sample spread in every coordinate.
DensityEstimate estimate_density(const Eigen::MatrixXd& samples,
                                 const std::vector<Eigen::VectorXd>& grid_axes,
                                 const Eigen::VectorXd& bandwidth = Eigen::VectorXd());

// Uniform axis helper.
Eigen::VectorXd linspace(double lo, double hi, int n);

}  // namespace roughlab
