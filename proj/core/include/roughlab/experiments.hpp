#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "roughlab/density.hpp"
#include "roughlab/fbm_conditional.hpp"
#include "roughlab/malliavin.hpp"
#include "roughlab/norris.hpp"
#include "roughlab/rde.hpp"
#include "roughlab/roughness.hpp"

namespace roughlab {

// Flat experiment configuration; every field mirrors a CLI flag. Reports
// embed the full configuration, and re-running an embedded configuration
// reproduces the report bit for bit.
struct ExperimentConfig {
  std::string experiment;  // ou | levy | langevin | tails-roughness | tails-eigen | norris-suite
  double hurst = 0.4;
  double gamma = 0.35;
  double theta = 0.45;
  double t1 = 1.0;
  int n_points = 257;
  int level = 1;
  int n_samples = 1000;
  std::uint64_t seed = 1;
  std::string out_dir;

  // ou
  std::vector<double> ou_a;  // row-major n x n
  std::vector<double> ou_c;  // row-major n x m
  int ou_dim = 2;
  int ou_noise_dim = 1;

  // levy
  int levy_d = 2;
  int kde_samples = 20000;
  int kde_grid = 31;

  // langevin
  LangevinParams langevin;
  int langevin_steps = 100000;
  int window_points = 65;     // grid nodes per unit window
  int past_windows = 8;       // recorded-past horizon in windows
  double lyapunov_gamma = 0.1;
  double burn_in_fraction = 0.2;
  bool zero_noise = false;

  // norris suite
  int suite_dim = 2;
  bool calibrate = false;

  // tails
  std::vector<double> epsilons;
  std::string tails_system = "levy";

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

// Single Norris-suite instance: a rough driver, a controlled integrand read
// as a 1 x d matrix, a scalar drift component, and a random smooth observable
// of the driver for the derivative-bound family.
struct NorrisInstance {
  RoughPath driver;
  ControlledPath a_controlled;
  SampledPath b_path;
  ControlledPath observable;  // psi(X) with its exact derivative
  RoughnessReport report;
};

struct NorrisSuiteParams {
  double hurst = 0.4;
  double gamma = 0.35;
  double theta = 0.45;
  int n_points = 129;
  int level = 2;
  int dim = 2;
};

NorrisInstance make_norris_instance(const NorrisSuiteParams& params,
                                    std::uint64_t seed);

// Same instance family attached to an externally supplied driver (the CLI
// path); theta controls the roughness scan.
NorrisInstance make_norris_instance_for(const RoughPath& driver, double theta,
                                        std::uint64_t seed);

// Max ratios over a seeded suite; these are the quantities the calibrated
// constants freeze (constants = 1.5 x calibration maxima).
struct SuiteRatios {
  double norris_max = 0.0;
  double derivative_max = 0.0;
  double interp_derivative_max = 0.0;
  double lambda_ratio_max = 0.0;
  int violations_norris = 0;       // against the stored calibrated constants
  int violations_derivative = 0;
  int violations_interp = 0;
  int violations_lambda = 0;
  int instances = 0;
};

SuiteRatios norris_suite_ratios(const NorrisSuiteParams& params,
                                std::uint64_t master_seed, int count);

// Exact Ornstein-Uhlenbeck flow triple (J = exp(At)) on a grid.
FlowTriple ou_exact_flow(const Eigen::MatrixXd& a, const Grid& grid);

// Kalman rank of (C, AC, ..., A^{n-1} C).
int kalman_rank(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c,
                double rank_tol = 1e-8);

nlohmann::json run_ou(const ExperimentConfig& config);
nlohmann::json run_levy(const ExperimentConfig& config);
nlohmann::json run_langevin(const ExperimentConfig& config);
nlohmann::json run_norris_suite(const ExperimentConfig& config);

struct EigenTailTable {
  std::vector<TailRow> rows;
  double fitted_slope = 0.0;  // log P against log eps over the decaying range
};

EigenTailTable eigen_tail_study(const std::string& system_id, double hurst,
                                double t1, int n_points, int level, int n_samples,
                                const std::vector<double>& epsilons,
                                std::uint64_t seed);

nlohmann::json run_experiment(const ExperimentConfig& config);

// CSV writers with stable column order.
void write_tail_csv(const std::string& path, const std::vector<TailRow>& rows);

// Langevin trajectory diagnostics used by run_langevin and the tests.
struct LangevinDiagnostics {
  std::vector<double> hbar;        // Lyapunov values per retained step
  double fitted_alpha = 0.0;       // drift-rate fit of  dH/dt ~ -a H + c G
  double fitted_cprime = 0.0;
  double running_average_drift = 0.0;  // relative change of the |p|^2 running mean
  std::vector<double> q_samples;   // post-burn-in first q coordinate
  bool exploded = false;
};

LangevinDiagnostics simulate_langevin(const ExperimentConfig& config,
                                      const Eigen::VectorXd& z0,
                                      std::uint64_t seed);

}  // namespace roughlab
