#include "roughlab/density.hpp"

#include <cmath>
#include <stdexcept>

#include "roughlab/errors.hpp"

namespace roughlab {

Eigen::VectorXd linspace(double lo, double hi, int n) {
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = lo + (hi - lo) * i / (n - 1);
  return out;
}

Eigen::VectorXd silverman_bandwidth(const Eigen::MatrixXd& samples) {
  const auto n = static_cast<double>(samples.rows());
  const int dim = static_cast<int>(samples.cols());
  Eigen::VectorXd h(dim);
  const double factor = std::pow(4.0 / ((dim + 2.0) * n), 1.0 / (dim + 4.0));
  for (int c = 0; c < dim; ++c) {
    const double m = samples.col(c).mean();
    const double sd =
        std::sqrt((samples.col(c).array() - m).square().sum() / (n - 1.0));
    h(c) = factor * sd;
  }
  return h;
}

double DensityEstimate::value_at(const Eigen::VectorXd& x) const {
  const auto n = static_cast<double>(samples.rows());
  const int dim = static_cast<int>(samples.cols());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    double k = 1.0;
    for (int c = 0; c < dim; ++c) {
      const double u = (x(c) - samples(i, c)) / bandwidth(c);
      k *= std::exp(-0.5 * u * u) / (bandwidth(c) * std::sqrt(2.0 * M_PI));
    }
    acc += k;
  }
  return acc / n;
}

DensityEstimate estimate_density(const Eigen::MatrixXd& samples,
                                 const std::vector<Eigen::VectorXd>& grid_axes,
                                 const Eigen::VectorXd& bandwidth) {
  if (samples.rows() < 100) {
    throw std::domain_error("estimate_density: need at least 100 samples");
  }
  const int dim = static_cast<int>(samples.cols());
  if (static_cast<int>(grid_axes.size()) != dim) {
    throw std::domain_error("estimate_density: need one grid axis per dimension");
  }

  DensityEstimate est;
  est.samples = samples;
  est.bandwidth = bandwidth.size() ? bandwidth : silverman_bandwidth(samples);
  for (int c = 0; c < dim; ++c) {
    if (!(est.bandwidth(c) > 0.0)) {
      throw NumericalError("estimate_density: degenerate sample spread in coordinate " +
                           std::to_string(c));
    }
  }
  est.grid_axes = grid_axes;

  std::vector<int> sizes(dim);
  long total = 1;
  for (int c = 0; c < dim; ++c) {
    sizes[c] = static_cast<int>(grid_axes[c].size());
    total *= sizes[c];
  }
  est.values.resize(total);

  Eigen::VectorXd x(dim);
  double cell = 1.0;
  for (int c = 0; c < dim; ++c) cell *= grid_axes[c](1) - grid_axes[c](0);
  double integral = 0.0;
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    for (int c = dim - 1; c >= 0; --c) {
      x(c) = grid_axes[c](rem % sizes[c]);
      rem /= sizes[c];
    }
    est.values[idx] = est.value_at(x);
    integral += est.values[idx] * cell;
  }
  est.grid_integral = integral;
  return est;
}

}  // namespace roughlab
