#include "roughlab/experiments.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "roughlab/brackets.hpp"
#include "roughlab/calibrated_constants.hpp"
#include "roughlab/cutoff.hpp"
#include "roughlab/errors.hpp"
#include "roughlab/fbm.hpp"
#include "roughlab/rng.hpp"
#include "roughlab/rough_integral.hpp"
#include "roughlab/stats.hpp"

namespace roughlab {

using nlohmann::json;

json ExperimentConfig::to_json() const {
  json j;
  j["experiment"] = experiment;
  j["hurst"] = hurst;
  j["gamma"] = gamma;
  j["theta"] = theta;
  j["t1"] = t1;
  j["n_points"] = n_points;
  j["level"] = level;
  j["n_samples"] = n_samples;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  j["ou_a"] = ou_a;
  j["ou_c"] = ou_c;
  j["ou_dim"] = ou_dim;
  j["ou_noise_dim"] = ou_noise_dim;
  j["levy_d"] = levy_d;
  j["kde_samples"] = kde_samples;
  j["kde_grid"] = kde_grid;
  j["langevin_dim"] = langevin.dim;
  j["langevin_kappa"] = langevin.kappa;
  j["langevin_bump_amp"] = langevin.bump_amp;
  j["langevin_bump_sigma"] = langevin.bump_sigma;
  j["langevin_steps"] = langevin_steps;
  j["window_points"] = window_points;
  j["past_windows"] = past_windows;
  j["lyapunov_gamma"] = lyapunov_gamma;
  j["burn_in_fraction"] = burn_in_fraction;
  j["zero_noise"] = zero_noise;
  j["suite_dim"] = suite_dim;
  j["calibrate"] = calibrate;
  j["epsilons"] = epsilons;
  j["tails_system"] = tails_system;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  c.experiment = j.value("experiment", c.experiment);
  c.hurst = j.value("hurst", c.hurst);
  c.gamma = j.value("gamma", c.gamma);
  c.theta = j.value("theta", c.theta);
  c.t1 = j.value("t1", c.t1);
  c.n_points = j.value("n_points", c.n_points);
  c.level = j.value("level", c.level);
  c.n_samples = j.value("n_samples", c.n_samples);
  c.seed = j.value("seed", c.seed);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.ou_a = j.value("ou_a", c.ou_a);
  c.ou_c = j.value("ou_c", c.ou_c);
  c.ou_dim = j.value("ou_dim", c.ou_dim);
  c.ou_noise_dim = j.value("ou_noise_dim", c.ou_noise_dim);
  c.levy_d = j.value("levy_d", c.levy_d);
  c.kde_samples = j.value("kde_samples", c.kde_samples);
  c.kde_grid = j.value("kde_grid", c.kde_grid);
  c.langevin.dim = j.value("langevin_dim", c.langevin.dim);
  c.langevin.kappa = j.value("langevin_kappa", c.langevin.kappa);
  c.langevin.bump_amp = j.value("langevin_bump_amp", c.langevin.bump_amp);
  c.langevin.bump_sigma = j.value("langevin_bump_sigma", c.langevin.bump_sigma);
  c.langevin_steps = j.value("langevin_steps", c.langevin_steps);
  c.window_points = j.value("window_points", c.window_points);
  c.past_windows = j.value("past_windows", c.past_windows);
  c.lyapunov_gamma = j.value("lyapunov_gamma", c.lyapunov_gamma);
  c.burn_in_fraction = j.value("burn_in_fraction", c.burn_in_fraction);
  c.zero_noise = j.value("zero_noise", c.zero_noise);
  c.suite_dim = j.value("suite_dim", c.suite_dim);
  c.calibrate = j.value("calibrate", c.calibrate);
  c.epsilons = j.value("epsilons", c.epsilons);
  c.tails_system = j.value("tails_system", c.tails_system);
  return c;
}

// ---------------------------------------------------------------------------
// Norris suite
// ---------------------------------------------------------------------------

NorrisInstance make_norris_instance(const NorrisSuiteParams& params,
                                    std::uint64_t seed) {
  const Grid grid(0.0, 1.0, params.n_points);
  FbmSampler sampler(params.hurst, grid, substream_seed(seed, 1), params.dim);
  return make_norris_instance_for(lift_fbm(sampler, params.level, params.gamma),
                                  params.theta, seed);
}

NorrisInstance make_norris_instance_for(const RoughPath& driver, double theta,
                                        std::uint64_t seed) {
  const int d = driver.dim();
  const Grid& grid = driver.grid();
  auto base = std::make_shared<RoughPath>(driver);

  GaussianStream coeffs(substream_seed(seed, 2));
  // A_{0i}(x) = a_i + sum_j (b_ij sin x_j + c_ij cos x_j), read as a 1 x d matrix
  Eigen::VectorXd a0(d);
  Eigen::MatrixXd bs(d, d), cs(d, d);
  coeffs.fill(a0);
  coeffs.fill(bs);
  coeffs.fill(cs);
  a0 *= 0.5;
  bs *= 0.5;
  cs *= 0.5;

  const int n = grid.n_points();
  Eigen::MatrixXd a_values(n, d);
  std::vector<Eigen::MatrixXd> a_deriv(n, Eigen::MatrixXd::Zero(d, d));
  for (int t = 0; t < n; ++t) {
    const Eigen::VectorXd x = driver.value(t);
    for (int i = 0; i < d; ++i) {
      double v = a0(i);
      for (int j = 0; j < d; ++j) {
        v += bs(i, j) * std::sin(x(j)) + cs(i, j) * std::cos(x(j));
      }
      a_values(t, i) = v;
      for (int k = 0; k < d; ++k) {
        a_deriv[t](i, k) = bs(i, k) * std::cos(x(k)) - cs(i, k) * std::sin(x(k));
      }
    }
  }
  ControlledPath a_controlled(base, std::move(a_values), std::move(a_deriv));

  // scalar drift component: low-order trigonometric polynomial in t
  Eigen::VectorXd bcoef(6);
  coeffs.fill(bcoef);
  SampledPath b_path = SampledPath::sample_scalar(grid, [&](double t) {
    double v = 0.0;
    for (int k = 1; k <= 3; ++k) {
      v += 0.5 * bcoef(2 * k - 2) * std::sin(k * M_PI * t) +
           0.5 * bcoef(2 * k - 1) * std::cos(k * M_PI * t);
    }
    return v;
  });

  // scalar observable psi(X) with exact derivative, for the derivative bound
  Eigen::VectorXd pa(d), pb(d);
  coeffs.fill(pa);
  coeffs.fill(pb);
  Eigen::MatrixXd z_values(n, 1);
  std::vector<Eigen::MatrixXd> z_deriv(n, Eigen::MatrixXd::Zero(1, d));
  for (int t = 0; t < n; ++t) {
    const Eigen::VectorXd x = driver.value(t);
    double v = 0.0;
    for (int j = 0; j < d; ++j) v += pa(j) * std::sin(x(j)) + pb(j) * x(j);
    z_values(t, 0) = v;
    for (int j = 0; j < d; ++j) {
      z_deriv[t](0, j) = pa(j) * std::cos(x(j)) + pb(j);
    }
  }
  ControlledPath observable(base, std::move(z_values), std::move(z_deriv));

  RoughnessOptions ropts;
  ropts.sphere_resolution = 64;
  RoughnessReport report =
      discrete_roughness(driver.path(), theta, default_n_max(grid), ropts);

  return NorrisInstance{*base, std::move(a_controlled), std::move(b_path),
                        std::move(observable), std::move(report)};
}

SuiteRatios norris_suite_ratios(const NorrisSuiteParams& params,
                                std::uint64_t master_seed, int count) {
  SuiteRatios out;
  out.instances = count;
  for (int i = 0; i < count; ++i) {
    const NorrisInstance inst =
        make_norris_instance(params, substream_seed(master_seed, i));

    // Theorem-style ratio
    const NorrisCertificate cert = norris_bound(inst.a_controlled, inst.b_path,
                                                inst.driver, inst.report,
                                                params.gamma, 1.0);
    if (cert.bound_value > 0.0) {
      const double ratio = cert.lhs / cert.bound_value;
      out.norris_max = std::max(out.norris_max, ratio);
      if (ratio > calibrated::norris_m) ++out.violations_norris;
    }

    // Derivative-uniqueness ratio
    const double dbound =
        gubinelli_derivative_bound(inst.observable, inst.report, params.gamma, 1.0);
    if (dbound > 0.0) {
      const double ratio = inst.observable.derivative_sup_norm() / dbound;
      out.derivative_max = std::max(out.derivative_max, ratio);
      if (ratio > calibrated::prop_derivative_m) ++out.violations_derivative;
    }

    // Derivative interpolation ratio
    const SampledPath big_f = time_integral(inst.b_path);
    const double ibound =
        interpolation_derivative(big_f, inst.b_path, params.gamma, 1.0);
    if (ibound > 0.0) {
      const double ratio = inst.b_path.sup_norm() / ibound;
      out.interp_derivative_max = std::max(out.interp_derivative_max, ratio);
      if (ratio > calibrated::interp_derivative_m) ++out.violations_interp;
    }

    // Norm-vs-cutoff ratio at the documented exponents
    const double beta = 0.37;
    const int q = 52;
    const double lam = lambda_cutoff(inst.driver, beta, q);
    if (lam > 0.0) {
      const double norm2 = std::pow(inst.driver.path().holder_seminorm(params.gamma), 2) +
                           inst.driver.area_norm(2.0 * params.gamma);
      const double ratio = norm2 / std::pow(lam, 1.0 / q);
      out.lambda_ratio_max = std::max(out.lambda_ratio_max, ratio);
      if (ratio > calibrated::lambda_ratio_bound) ++out.violations_lambda;
    }
  }
  return out;
}

json run_norris_suite(const ExperimentConfig& config) {
  NorrisSuiteParams params;
  params.hurst = config.hurst;
  params.gamma = config.gamma;
  params.theta = config.theta;
  params.dim = config.suite_dim;

  json report;
  report["config"] = config.to_json();
  if (config.n_samples == 0) {
    report["empty"] = true;
    return report;
  }

  const SuiteRatios cal = norris_suite_ratios(
      params, calibrated::calibration_master_seed, config.n_samples);
  json jc;
  jc["max_ratio_norris"] = cal.norris_max;
  jc["max_ratio_derivative"] = cal.derivative_max;
  jc["max_ratio_interp_derivative"] = cal.interp_derivative_max;
  jc["max_ratio_lambda"] = cal.lambda_ratio_max;
  jc["instances"] = cal.instances;
  report["calibration"] = jc;

  if (config.calibrate) {
    json suggestion;
    suggestion["norris_m"] = 1.5 * cal.norris_max;
    suggestion["prop_derivative_m"] = 1.5 * cal.derivative_max;
    suggestion["interp_derivative_m"] = 1.5 * cal.interp_derivative_max;
    suggestion["lambda_ratio_bound"] = 1.5 * cal.lambda_ratio_max;
    report["suggested_constants"] = suggestion;
  } else {
    const SuiteRatios val = norris_suite_ratios(
        params, calibrated::validation_master_seed, config.n_samples);
    json jv;
    jv["max_ratio_norris"] = val.norris_max;
    jv["max_ratio_derivative"] = val.derivative_max;
    jv["max_ratio_interp_derivative"] = val.interp_derivative_max;
    jv["max_ratio_lambda"] = val.lambda_ratio_max;
    jv["violations_norris"] = val.violations_norris;
    jv["violations_derivative"] = val.violations_derivative;
    jv["violations_interp"] = val.violations_interp;
    jv["violations_lambda"] = val.violations_lambda;
    jv["instances"] = val.instances;
    report["validation"] = jv;
    report["stored_constants"] = {
        {"norris_m", calibrated::norris_m},
        {"prop_derivative_m", calibrated::prop_derivative_m},
        {"interp_derivative_m", calibrated::interp_derivative_m},
        {"lambda_ratio_bound", calibrated::lambda_ratio_bound}};
  }
  return report;
}

// ---------------------------------------------------------------------------
// Ornstein-Uhlenbeck
// ---------------------------------------------------------------------------

FlowTriple ou_exact_flow(const Eigen::MatrixXd& a, const Grid& grid) {
  FlowTriple flow{grid, {}, {}, {}};
  const int n = static_cast<int>(a.rows());
  flow.z.assign(grid.n_points(), Eigen::VectorXd::Zero(n));
  for (int i = 0; i < grid.n_points(); ++i) {
    const Eigen::MatrixXd at = a * grid.node(i);
    flow.jac.push_back(at.exp());
    flow.jac_inv.push_back((-at).exp());
  }
  return flow;
}

int kalman_rank(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c, double rank_tol) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(c.cols());
  Eigen::MatrixXd k(n, n * m);
  Eigen::MatrixXd block = c;
  for (int p = 0; p < n; ++p) {
    k.middleCols(p * m, m) = block;
    block = a * block;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(k);
  const Eigen::VectorXd sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) rank += (sv(i) > rank_tol * sv(0)) ? 1 : 0;
  return rank;
}

namespace {

Eigen::MatrixXd config_matrix(const std::vector<double>& flat, int rows, int cols,
                              const char* what) {
  if (static_cast<int>(flat.size()) != rows * cols) {
    throw ConfigError(std::string("config: ") + what + " needs " +
                      std::to_string(rows * cols) + " entries");
  }
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = flat[r * cols + c];
  }
  return m;
}

// Exact covariance of the vector of fBm increments over the grid cells
// (per noise coordinate; coordinates are independent).
double fbm_increment_cov(double hurst, double s0, double s1, double t0, double t1) {
  const double h2 = 2.0 * hurst;
  auto r = [h2](double u) { return std::pow(std::abs(u), h2); };
  return 0.5 * (r(t1 - s0) + r(t0 - s1) - r(t0 - s0) - r(t1 - s1));
}

}  // namespace

json run_ou(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  if (cfg.ou_a.empty()) {
    cfg.ou_a = {0.0, 1.0, -1.0, -1.0};
    cfg.ou_c = {0.0, 1.0};
    cfg.ou_dim = 2;
    cfg.ou_noise_dim = 1;
  }
  const Eigen::MatrixXd a =
      config_matrix(cfg.ou_a, cfg.ou_dim, cfg.ou_dim, "ou_a");
  const Eigen::MatrixXd c =
      config_matrix(cfg.ou_c, cfg.ou_dim, cfg.ou_noise_dim, "ou_c");
  const int n = cfg.ou_dim;
  const int m = cfg.ou_noise_dim;

  // stability: A + A^T < 0
  const double stab =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a + a.transpose())
          .eigenvalues()
          .maxCoeff();
  if (!(stab < 0.0)) {
    throw ConfigError("run_ou: A + A^T must be negative definite");
  }

  json report;
  report["config"] = cfg.to_json();

  // Kalman rank vs bracket-ladder rank
  const int krank = kalman_rank(a, c);
  const VectorFieldSystem vfs = make_ou_system(a, c);
  const HormanderReport horm =
      hormander_rank(vfs, Eigen::VectorXd::Zero(n), n - 1 > 0 ? n - 1 : 1);
  report["kalman_rank"] = krank;
  report["hormander_rank"] = horm.rank;
  report["hormander_level"] =
      horm.full_rank_level ? json(*horm.full_rank_level) : json(nullptr);
  report["ranks_agree"] = (krank == horm.rank);

  // Malliavin matrices on the exact flow
  const Grid grid(0.0, cfg.t1, cfg.n_points);
  const FlowTriple flow = ou_exact_flow(a, grid);
  const MalliavinReport mall = malliavin_report(flow, vfs, cfg.hurst);
  report["lambda_min_c"] = mall.lambda_min_c;
  report["lambda_min_m"] = mall.lambda_min_m;

  // Monte-Carlo covariance of x_T against the exact-increment quadrature
  const int n_mc = cfg.n_samples;
  Eigen::MatrixXd xs(n_mc, n);
  const Eigen::VectorXd z0 = Eigen::VectorXd::Zero(n);
  for (int s = 0; s < n_mc; ++s) {
    const SampledPath path =
        sample_fbm(cfg.hurst, grid, substream_seed(cfg.seed, s), m);
    const RoughPath lift = lift_smooth(path, cfg.gamma);
    const ControlledPath sol = solve_rde(vfs, z0, lift);
    xs.row(s) = sol.value(grid.n_points() - 1).transpose();
  }
  const Eigen::RowVectorXd mean_x = xs.colwise().mean();
  const Eigen::MatrixXd centered = xs.rowwise() - mean_x;
  const Eigen::MatrixXd cov_mc = centered.transpose() * centered / (n_mc - 1.0);

  // oracle: x_T = sum_k exp(A (T - mid_k)) C  dB_k with the exact increment
  // covariance of fBm
  const int cells = 512;
  const double dt = cfg.t1 / cells;
  std::vector<Eigen::MatrixXd> mk(cells);
  for (int k = 0; k < cells; ++k) {
    const double mid = (k + 0.5) * dt;
    mk[k] = (a * (cfg.t1 - mid)).exp() * c;
  }
  Eigen::MatrixXd cov_oracle = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < cells; ++k) {
    for (int l = 0; l < cells; ++l) {
      const double g = fbm_increment_cov(cfg.hurst, k * dt, (k + 1) * dt,
                                         l * dt, (l + 1) * dt);
      cov_oracle += g * mk[k] * mk[l].transpose();
    }
  }

  Eigen::MatrixXd se(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      se(i, j) = std::sqrt((cov_oracle(i, i) * cov_oracle(j, j) +
                            cov_oracle(i, j) * cov_oracle(i, j)) /
                           n_mc);
    }
  }
  double worst_sigma = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      worst_sigma = std::max(worst_sigma,
                             std::abs(cov_mc(i, j) - cov_oracle(i, j)) / se(i, j));
    }
  }
  report["covariance_mc"] = std::vector<double>(cov_mc.data(),
                                                cov_mc.data() + n * n);
  report["covariance_oracle"] = std::vector<double>(
      cov_oracle.data(), cov_oracle.data() + n * n);
  report["covariance_max_sigmas"] = worst_sigma;

  // density witness for the first coordinate
  const Eigen::MatrixXd first = xs.leftCols(1);
  const double lo = first.minCoeff(), hi = first.maxCoeff();
  const DensityEstimate kde =
      estimate_density(first, {linspace(lo - 1.0, hi + 1.0, 201)});
  report["density_grid_integral"] = kde.grid_integral;
  return report;
}

// ---------------------------------------------------------------------------
// Levy area
// ---------------------------------------------------------------------------

json run_levy(const ExperimentConfig& config) {
  const int d = config.levy_d;
  if (d < 2) throw ConfigError("run_levy: levy_d must be >= 2");
  const int n_state = levy_state_dim(d);
  const VectorFieldSystem vfs = make_levy_system(d);

  json report;
  report["config"] = config.to_json();

  // bracket identity at seeded probe points
  GaussianStream probes(substream_seed(config.seed, 101));
  double bracket_err = 0.0;
  for (int p = 0; p < 100; ++p) {
    Eigen::VectorXd z(n_state);
    probes.fill(z);
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        Eigen::VectorXd expect = Eigen::VectorXd::Zero(n_state);
        expect(levy_area_index(d, i, j)) = 2.0;
        bracket_err = std::max(
            (lie_bracket(vfs.driving(i), vfs.driving(j), z) - expect).norm(),
            bracket_err);
      }
    }
  }
  report["bracket_identity_max_error"] = bracket_err;

  // two-route agreement: RDE solve vs direct lift antisymmetrization
  const Grid grid(0.0, config.t1, config.n_points);
  double two_route = 0.0;
  const int n_seeds = std::min(config.n_samples, 100);
  for (int s = 0; s < n_seeds; ++s) {
    FbmSampler sampler(config.hurst, grid, substream_seed(config.seed, 200 + s), d);
    const RoughPath lift = lift_fbm(sampler, config.level, config.gamma);
    const ControlledPath sol =
        solve_rde(vfs, Eigen::VectorXd::Zero(n_state), lift);
    const Eigen::MatrixXd area = lift.area(0, grid.n_points() - 1);
    const Eigen::VectorXd zt = sol.value(grid.n_points() - 1);
    for (int i = 0; i < d; ++i) {
      two_route = std::max(two_route, std::abs(zt(i) - lift.increment(0, grid.n_points() - 1)(i)));
      for (int j = i + 1; j < d; ++j) {
        const double w_direct = area(i, j) - area(j, i);
        two_route = std::max(two_route,
                             std::abs(zt(levy_area_index(d, i, j)) - w_direct));
      }
    }
  }
  report["two_route_max_error"] = two_route;

  // marginal variance E B_1(t1)^2 over n_samples draws
  {
    const int n_var = config.n_samples;
    std::vector<double> b1(n_var);
    for (int s = 0; s < n_var; ++s) {
      const SampledPath p =
          sample_fbm(config.hurst, grid, substream_seed(config.seed, 500000 + s), 1);
      b1[s] = p.scalar(grid.n_points() - 1);
    }
    std::vector<double> sq(n_var);
    for (int s = 0; s < n_var; ++s) sq[s] = b1[s] * b1[s];
    report["b1_second_moment"] = mean(sq);
    report["b1_second_moment_se"] = std::sqrt(variance(sq) / n_var);
    report["b1_expected"] = std::pow(config.t1, 2.0 * config.hurst);
  }

  // joint density of (B_1, B_2, W_12) at t1
  {
    const int n_kde = config.kde_samples;
    Eigen::MatrixXd samples(n_kde, 3);
    for (int s = 0; s < n_kde; ++s) {
      FbmSampler sampler(config.hurst, grid,
                         substream_seed(config.seed, 900000 + s), d);
      const RoughPath lift = lift_fbm(sampler, config.level, config.gamma);
      const Eigen::MatrixXd area = lift.area(0, grid.n_points() - 1);
      const Eigen::VectorXd x = lift.increment(0, grid.n_points() - 1);
      samples(s, 0) = x(0);
      samples(s, 1) = x(1);
      samples(s, 2) = area(0, 1) - area(1, 0);
    }
    std::vector<Eigen::VectorXd> axes;
    for (int c = 0; c < 3; ++c) {
      const double lo = samples.col(c).minCoeff();
      const double hi = samples.col(c).maxCoeff();
      const double pad = 0.75 * (hi - lo) / 2.0;
      axes.push_back(linspace(lo - pad, hi + pad, config.kde_grid));
    }
    const DensityEstimate kde = estimate_density(samples, axes);
    report["kde_grid_integral"] = kde.grid_integral;
    report["kde_bandwidth"] = std::vector<double>(
        kde.bandwidth.data(), kde.bandwidth.data() + kde.bandwidth.size());
  }
  return report;
}

// ---------------------------------------------------------------------------
// Langevin
// ---------------------------------------------------------------------------

namespace {

// Augmented system (q, p, qt, pt): the comparison pair (qt, pt) follows the
// trivial linear dynamics and shares the driving noise with p.
VectorFieldSystem make_augmented_langevin(const LangevinParams& params) {
  const int m = params.dim;
  const int n = 4 * m;
  const LangevinParams p = params;

  auto eval = [p, m, n](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    const Eigen::VectorXd q = z.segment(0, m);
    const Eigen::VectorXd mom = z.segment(m, m);
    const Eigen::VectorXd qt = z.segment(2 * m, m);
    const Eigen::VectorXd pt = z.segment(3 * m, m);
    Eigen::VectorXd out(n);
    out.segment(0, m) = mom;
    out.segment(m, m) = -langevin_grad_potential(p, q) - mom;
    out.segment(2 * m, m) = -qt;
    out.segment(3 * m, m) = -pt;
    return out;
  };
  VectorField drift(n, eval);
  std::vector<VectorField> driving;
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(m + k) = 1.0;
    b(3 * m + k) = 1.0;
    driving.push_back(constant_field(std::move(b)));
  }
  return VectorFieldSystem(std::move(drift), std::move(driving));
}

}  // namespace

LangevinDiagnostics simulate_langevin(const ExperimentConfig& config,
                                      const Eigen::VectorXd& z0,
                                      std::uint64_t seed) {
  const int m = config.langevin.dim;
  const VectorFieldSystem vfs = make_augmented_langevin(config.langevin);
  const Grid wgrid(0.0, 1.0, config.window_points);
  const int steps_per_window = wgrid.n_steps();
  const int windows =
      (config.langevin_steps + steps_per_window - 1) / steps_per_window;
  const double glyap = config.lyapunov_gamma;

  LangevinDiagnostics diag;
  diag.hbar.reserve(static_cast<size_t>(windows) * steps_per_window);
  std::vector<double> gvals, dh_dt, hmid, psq, q1;

  std::deque<SampledPath> window_paths;  // driving increments, one per window
  Eigen::VectorXd z = z0;

  auto hbar_of = [&](const Eigen::VectorXd& state) {
    const Eigen::VectorXd pp = state.segment(m, m) - state.segment(3 * m, m);
    const Eigen::VectorXd qq = state.segment(0, m) - state.segment(2 * m, m);
    return 0.5 * pp.squaredNorm() + langevin_potential(config.langevin, qq) +
           glyap * pp.dot(qq);
  };

  try {
    for (int w = 0; w < windows; ++w) {
      RoughPath driver = [&]() {
        if (config.zero_noise) {
          return lift_smooth(SampledPath::zero(wgrid, m), config.gamma);
        }
        std::optional<SampledPath> past;
        if (!window_paths.empty()) {
          const int k = static_cast<int>(window_paths.size());
          const int n_nodes = k * steps_per_window + 1;
          Eigen::MatrixXd vals(n_nodes, m);
          vals.row(0).setZero();
          int row = 1;
          for (const auto& wp : window_paths) {
            for (int i = 1; i < wp.n_points(); ++i) {
              vals.row(row) = vals.row(row - 1) +
                              (wp.values().row(i) - wp.values().row(i - 1));
              ++row;
            }
          }
          vals.rowwise() -= vals.row(n_nodes - 1).eval();
          past = SampledPath(Grid(-static_cast<double>(k), 0.0, n_nodes),
                             std::move(vals));
        }
        NoiseRecord rec = sample_conditional_future(
            past, config.hurst, wgrid, substream_seed(seed, w), config.level,
            config.gamma);
        return rec.future_lift;
      }();

      const ControlledPath sol = solve_rde(vfs, z, driver);
      double h_prev = hbar_of(z);
      for (int i = 1; i < wgrid.n_points(); ++i) {
        const Eigen::VectorXd zi = sol.value(i);
        const double h_i = hbar_of(zi);
        diag.hbar.push_back(h_i);
        dh_dt.push_back((h_i - h_prev) / wgrid.spacing());
        hmid.push_back(h_prev);
        const Eigen::VectorXd qt = zi.segment(2 * m, m);
        const Eigen::VectorXd pt = zi.segment(3 * m, m);
        gvals.push_back(1.0 + pt.squaredNorm() + qt.squaredNorm());
        psq.push_back(zi.segment(m, m).squaredNorm());
        q1.push_back(zi(0));
        h_prev = h_i;
      }
      z = sol.value(wgrid.n_points() - 1);

      window_paths.push_back(SampledPath(
          wgrid, driver.path().values().rowwise() - driver.path().values().row(0)));
      while (static_cast<int>(window_paths.size()) > config.past_windows) {
        window_paths.pop_front();
      }
    }
  } catch (const ExplosionError&) {
    diag.exploded = true;
    return diag;
  }

  // least-squares fit of dH/dt = -alpha H + cprime G
  {
    double shh = 0, shg = 0, sgg = 0, shy = 0, sgy = 0;
    for (size_t i = 0; i < dh_dt.size(); ++i) {
      shh += hmid[i] * hmid[i];
      shg += hmid[i] * gvals[i];
      sgg += gvals[i] * gvals[i];
      shy += hmid[i] * dh_dt[i];
      sgy += gvals[i] * dh_dt[i];
    }
    const double det = shh * sgg - shg * shg;
    if (std::abs(det) > 1e-12) {
      const double coef_h = (sgg * shy - shg * sgy) / det;
      const double coef_g = (shh * sgy - shg * shy) / det;
      diag.fitted_alpha = -coef_h;
      diag.fitted_cprime = coef_g;
    }
  }

  // running average of |p|^2 over the trajectory; drift of the running mean
  // across the final half
  {
    std::vector<double> running(psq.size());
    double acc = 0.0;
    for (size_t i = 0; i < psq.size(); ++i) {
      acc += psq[i];
      running[i] = acc / static_cast<double>(i + 1);
    }
    const double final_mean = running.back();
    double worst = 0.0;
    for (size_t i = psq.size() / 2; i < psq.size(); ++i) {
      worst = std::max(worst, std::abs(running[i] - final_mean) /
                                  std::max(final_mean, 1e-12));
    }
    diag.running_average_drift = worst;
  }

  const size_t burn = static_cast<size_t>(config.burn_in_fraction * q1.size());
  diag.q_samples.assign(q1.begin() + burn, q1.end());
  return diag;
}

json run_langevin(const ExperimentConfig& config) {
  json report;
  report["config"] = config.to_json();

  const int m = config.langevin.dim;
  Eigen::VectorXd z0a = Eigen::VectorXd::Zero(4 * m);
  Eigen::VectorXd z0b = Eigen::VectorXd::Zero(4 * m);
  z0a.segment(0, 2 * m).setConstant(4.0);
  z0b.segment(0, 2 * m).setConstant(-4.0);

  const LangevinDiagnostics da = simulate_langevin(config, z0a,
                                                   substream_seed(config.seed, 1));
  report["exploded_a"] = da.exploded;
  report["fitted_alpha"] = da.fitted_alpha;
  report["fitted_cprime"] = da.fitted_cprime;
  report["running_average_drift"] = da.running_average_drift;

  if (!config.zero_noise) {
    const LangevinDiagnostics db = simulate_langevin(config, z0b,
                                                     substream_seed(config.seed, 2));
    report["exploded_b"] = db.exploded;
    if (!da.exploded && !db.exploded) {
      report["two_start_ks"] = ks_distance(da.q_samples, db.q_samples);
    }
  } else {
    double worst_rise = 0.0;
    for (size_t i = 1; i < da.hbar.size(); ++i) {
      worst_rise = std::max(worst_rise, da.hbar[i] - da.hbar[i - 1]);
    }
    report["hbar_max_rise"] = worst_rise;
  }
  return report;
}

// ---------------------------------------------------------------------------
// eigenvalue tails
// ---------------------------------------------------------------------------

namespace {

// driver Holder exponent for lifts in the tail studies: just below H
double lift_gamma_for(double hurst) {
  return std::min(0.5, std::max(1.0 / 3.0 + 1e-3, hurst - 0.05));
}

}  // namespace

EigenTailTable eigen_tail_study(const std::string& system_id, double hurst,
                                double t1, int n_points, int level, int n_samples,
                                const std::vector<double>& epsilons,
                                std::uint64_t seed) {
  VectorFieldSystem vfs = load_system(system_id);
  const int n = vfs.dim_state();
  const int d = vfs.dim_noise();
  const Eigen::VectorXd z0 = Eigen::VectorXd::Zero(n);

  const HormanderReport horm = hormander_rank(vfs, z0, 2);
  if (horm.rank < n) {
    throw HypothesisError("eigen_tail_study: system '" + system_id +
                          "' fails the bracket condition at the origin (rank " +
                          std::to_string(horm.rank) + " of " + std::to_string(n) + ")");
  }

  const Grid grid(0.0, t1, n_points);
  std::vector<double> lam(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    FbmSampler sampler(hurst, grid, substream_seed(seed, s), d);
    const RoughPath lift = lift_fbm(sampler, level, lift_gamma_for(hurst));
    const FlowTriple flow = jacobian_flow(vfs, z0, lift);
    lam[s] = smallest_eigenvalue(malliavin_matrix(flow, vfs, hurst));
  }

  EigenTailTable table;
  for (double eps : epsilons) {
    int count = 0;
    for (double v : lam) count += (v <= eps) ? 1 : 0;
    const double p = static_cast<double>(count) / n_samples;
    table.rows.push_back({eps, p, std::sqrt(p * (1.0 - p) / n_samples)});
  }
  std::vector<double> lx, ly;
  for (const auto& row : table.rows) {
    if (row.probability > 0.0 && row.probability < 1.0) {
      lx.push_back(std::log(row.epsilon));
      ly.push_back(std::log(row.probability));
    }
  }
  if (lx.size() >= 2) table.fitted_slope = linear_fit(lx, ly).slope;
  return table;
}

json run_experiment(const ExperimentConfig& config) {
  if (config.experiment == "ou") return run_ou(config);
  if (config.experiment == "levy") return run_levy(config);
  if (config.experiment == "langevin") return run_langevin(config);
  if (config.experiment == "norris-suite") return run_norris_suite(config);
  if (config.experiment == "tails-roughness") {
    const Grid grid(0.0, config.t1, config.n_points);
    const RoughnessTailTable table =
        roughness_tail_study(config.hurst, config.theta, config.n_samples,
                             config.epsilons, grid, 1, config.seed);
    json report;
    report["config"] = config.to_json();
    report["fitted_slope"] = table.fitted_slope;
    json rows = json::array();
    for (const auto& r : table.rows) {
      rows.push_back({{"epsilon", r.epsilon},
                      {"probability", r.probability},
                      {"std_error", r.std_error}});
    }
    report["rows"] = rows;
    return report;
  }
  if (config.experiment == "tails-eigen") {
    const EigenTailTable table = eigen_tail_study(
        config.tails_system, config.hurst, config.t1, config.n_points,
        config.level, config.n_samples, config.epsilons, config.seed);
    json report;
    report["config"] = config.to_json();
    report["fitted_slope"] = table.fitted_slope;
    json rows = json::array();
    for (const auto& r : table.rows) {
      rows.push_back({{"epsilon", r.epsilon},
                      {"probability", r.probability},
                      {"std_error", r.std_error}});
    }
    report["rows"] = rows;
    return report;
  }
  throw ConfigError("unknown experiment '" + config.experiment + "'");
}

void write_tail_csv(const std::string& path, const std::vector<TailRow>& rows) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os.precision(17);
  os << "epsilon,prob_estimate,stderr\n";
  for (const auto& r : rows) {
    os << r.epsilon << ',' << r.probability << ',' << r.std_error << '\n';
  }
}

}  // namespace roughlab
