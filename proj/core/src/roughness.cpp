#include "roughlab/roughness.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "roughlab/fbm.hpp"
#include "roughlab/rng.hpp"

namespace roughlab {

namespace {

// Width of the projected node set per dyadic interval, divided by the dyadic
// scale factor; minimized over intervals. proj holds <phi, X_i> per node.
double interval_objective(const std::vector<double>& proj, int n_steps, int n_max,
                          double total_length, double theta, int* arg_level,
                          int* arg_interval) {
  double best = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= n_max; ++level) {
    const int cells = 1 << level;
    const int stride = n_steps / cells;
    const double scale = std::pow(total_length / cells, theta);
    for (int k = 0; k < cells; ++k) {
      double lo = proj[k * stride], hi = lo;
      for (int i = k * stride + 1; i <= (k + 1) * stride; ++i) {
        lo = std::min(lo, proj[i]);
        hi = std::max(hi, proj[i]);
      }
      const double value = (hi - lo) / scale;
      if (value < best) {
        best = value;
        if (arg_level) *arg_level = level;
        if (arg_interval) *arg_interval = k + 1;
      }
    }
  }
  return best;
}

double evaluate_direction(const SampledPath& path, const Eigen::VectorXd& phi,
                          double theta, int n_max, int* arg_level,
                          int* arg_interval) {
  const int n = path.n_points();
  std::vector<double> proj(n);
  for (int i = 0; i < n; ++i) proj[i] = phi.dot(path.value(i));
  return interval_objective(proj, n - 1, n_max, path.grid().length(), theta,
                            arg_level, arg_interval);
}

std::vector<Eigen::VectorXd> direction_grid(int dim, int resolution,
                                            std::uint64_t seed) {
  std::vector<Eigen::VectorXd> dirs;
  if (dim == 1) {
    dirs.push_back(Eigen::VectorXd::Ones(1));
    return dirs;  // the width objective is even in phi
  }
  if (dim == 2) {
    dirs.reserve(resolution);
    for (int k = 0; k < resolution; ++k) {
      const double a = M_PI * k / resolution;  // antipodal directions coincide
      Eigen::VectorXd phi(2);
      phi << std::cos(a), std::sin(a);
      dirs.push_back(phi);
    }
    return dirs;
  }
  if (dim == 3) {
    // Fibonacci lattice on the sphere.
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    dirs.reserve(resolution);
    for (int k = 0; k < resolution; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / resolution;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = 2.0 * M_PI * k / golden;
      Eigen::VectorXd phi(3);
      phi << r * std::cos(a), r * std::sin(a), z;
      dirs.push_back(phi);
    }
    return dirs;
  }
  GaussianStream gauss(seed);
  dirs.reserve(resolution);
  for (int k = 0; k < resolution; ++k) {
    Eigen::VectorXd phi(dim);
    gauss.fill(phi);
    dirs.push_back(phi.normalized());
  }
  return dirs;
}

// Golden-section minimization of f over [a, b].
template <typename F>
double golden_section(F f, double a, double b, int iters, double* arg_out) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iters; ++it) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  const double x = (f1 < f2) ? x1 : x2;
  if (arg_out) *arg_out = x;
  return std::min(f1, f2);
}

}  // namespace

int default_n_max(const Grid& grid) {
  int n_max = 0;
  int steps = grid.n_steps();
  while (steps % 2 == 0 && steps / 2 >= 8) {
    steps /= 2;
    ++n_max;
  }
  return std::max(1, n_max);
}

RoughnessReport discrete_roughness(const SampledPath& path, double theta, int n_max,
                                   const RoughnessOptions& opts) {
  if (!(theta > 0.0) || theta > 1.0) {
    throw std::domain_error("discrete_roughness: theta must lie in (0, 1]");
  }
  const int n_steps = path.n_points() - 1;
  if (n_max < 1 || n_steps % (1 << n_max) != 0) {
    throw std::domain_error(
        "discrete_roughness: grid steps not divisible into 2^n_max cells");
  }

  RoughnessReport report;
  report.theta = theta;
  report.n_max = n_max;
  report.sphere_resolution = opts.sphere_resolution;

  const int dim = path.dim();
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_phi;
  for (const auto& phi : direction_grid(dim, opts.sphere_resolution,
                                        opts.direction_seed)) {
    int lev = 0, cell = 0;
    const double value = evaluate_direction(path, phi, theta, n_max, &lev, &cell);
    if (value < best) {
      best = value;
      best_phi = phi;
      report.argmin_level = lev;
      report.argmin_interval = cell;
    }
  }

  if (opts.refine && dim == 2) {
    const double a0 = std::atan2(best_phi(1), best_phi(0));
    const double half = M_PI / opts.sphere_resolution;
    double arg = a0;
    const double refined = golden_section(
        [&](double a) {
          Eigen::VectorXd phi(2);
          phi << std::cos(a), std::sin(a);
          return evaluate_direction(path, phi, theta, n_max, nullptr, nullptr);
        },
        a0 - half, a0 + half, 40, &arg);
    if (refined < best) {
      best = refined;
      best_phi << std::cos(arg), std::sin(arg);
      evaluate_direction(path, best_phi, theta, n_max, &report.argmin_level,
                         &report.argmin_interval);
    }
  } else if (opts.refine && dim == 3) {
    // One golden-section pass along two orthogonal tangent great circles.
    Eigen::Vector3d p = best_phi.head<3>();
    Eigen::Vector3d u = p.unitOrthogonal();
    const double half = 2.0 / std::sqrt(static_cast<double>(opts.sphere_resolution));
    for (int pass = 0; pass < 2; ++pass) {
      double arg = 0.0;
      const double refined = golden_section(
          [&](double a) {
            const Eigen::Vector3d phi = (std::cos(a) * p + std::sin(a) * u).normalized();
            return evaluate_direction(path, phi, theta, n_max, nullptr, nullptr);
          },
          -half, half, 40, &arg);
      if (refined < best) {
        best = refined;
        p = (std::cos(arg) * p + std::sin(arg) * u).normalized();
      }
      u = p.cross(u).normalized();
    }
    best_phi = p;
    evaluate_direction(path, best_phi, theta, n_max, &report.argmin_level,
                       &report.argmin_interval);
  }

  report.d_theta = best;
  report.l_theta_lower = best / (2.0 * std::pow(8.0, theta));
  report.argmin_direction = best_phi;
  return report;
}

RoughnessTailTable roughness_tail_study(double hurst, double theta, int n_samples,
                                        const std::vector<double>& epsilons,
                                        const Grid& grid, int dim,
                                        std::uint64_t seed) {
  RoughnessTailTable table;
  table.theta_above_hurst = theta > hurst;

  const int n_max = default_n_max(grid);
  std::vector<double> values(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    const SampledPath x = sample_fbm(hurst, grid, substream_seed(seed, s), dim);
    values[s] = discrete_roughness(x, theta, n_max).d_theta;
  }

  table.rows.reserve(epsilons.size());
  for (double eps : epsilons) {
    int count = 0;
    for (double v : values) count += (v < eps) ? 1 : 0;
    const double p = static_cast<double>(count) / n_samples;
    table.rows.push_back({eps, p, std::sqrt(p * (1.0 - p) / n_samples)});
  }

  // least-squares slope of log P against eps^{-2}, over rows with P > 0
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& row : table.rows) {
    if (row.probability <= 0.0 || row.epsilon <= 0.0) continue;
    const double x = 1.0 / (row.epsilon * row.epsilon);
    const double y = std::log(row.probability);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++m;
  }
  if (m >= 2) table.fitted_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return table;
}

}  // namespace roughlab
