// roughlab: command-line surface of the rough-path laboratory.
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical error,
// 4 hypothesis violation (e.g. the bracket condition fails).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "roughlab/brackets.hpp"
#include "roughlab/calibrated_constants.hpp"
#include "roughlab/errors.hpp"
#include "roughlab/experiments.hpp"
#include "roughlab/fbm.hpp"
#include "roughlab/fbm_conditional.hpp"
#include "roughlab/io.hpp"
#include "roughlab/malliavin.hpp"
#include "roughlab/norris.hpp"
#include "roughlab/rde.hpp"
#include "roughlab/roughness.hpp"
#include "roughlab/rough_integral.hpp"

namespace {

using nlohmann::json;
using namespace roughlab;

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

Eigen::VectorXd parse_vector(const std::string& csv) {
  const std::vector<double> v = parse_list(csv);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
}

void emit(const json& j, const std::string& out_file) {
  if (out_file.empty()) {
    std::cout << j.dump(2) << std::endl;
  } else {
    std::ofstream os(out_file);
    if (!os) throw ConfigError("cannot open '" + out_file + "'");
    os << j.dump(2) << "\n";
  }
}

json roughness_to_json(const RoughnessReport& r) {
  json j;
  j["theta"] = r.theta;
  j["d_theta"] = r.d_theta;
  j["l_theta_lower"] = r.l_theta_lower;
  j["argmin_level"] = r.argmin_level;
  j["argmin_interval"] = r.argmin_interval;
  j["argmin_direction"] = std::vector<double>(
      r.argmin_direction.data(),
      r.argmin_direction.data() + r.argmin_direction.size());
  j["n_max"] = r.n_max;
  j["sphere_resolution"] = r.sphere_resolution;
  return j;
}

std::vector<double> flat(const Eigen::MatrixXd& m) {
  std::vector<double> out;
  out.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
  return out;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"roughlab: numerics for rough differential equations driven by "
               "fractional Brownian motion (1/3 < H < 1/2)"};
  app.require_subcommand(1);

  // ---- fbm ----
  auto* fbm = app.add_subcommand("fbm", "sample an fBm rough-path lift");
  double fbm_h = 0.4, fbm_t1 = 1.0, fbm_gamma = 0.35;
  int fbm_n = 257, fbm_level = 2, fbm_dim = 1;
  std::uint64_t fbm_seed = 0;
  std::string fbm_out, fbm_past;
  fbm->add_option("--hurst", fbm_h, "Hurst parameter in (1/3, 1/2)")->required();
  fbm->add_option("--n", fbm_n, "grid nodes");
  fbm->add_option("--t1", fbm_t1, "final time");
  fbm->add_option("--seed", fbm_seed, "master seed")->required();
  fbm->add_option("--level", fbm_level, "dyadic refinement level for the lift");
  fbm->add_option("--dim", fbm_dim, "driving dimension");
  fbm->add_option("--gamma", fbm_gamma, "declared Holder exponent");
  fbm->add_option("--past", fbm_past,
                  "sampled-path file with the past on [-T,0]; switches to the "
                  "conditional sampler");
  fbm->add_option("--out", fbm_out, "output rough-path file")->required();
  fbm->set_config("--config");

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "solve dZ = V0 dt + V_i dX^i");
  std::string solve_system, solve_noise, solve_out, solve_z0 = "0";
  solve->add_option("--system", solve_system, "built-in (ou|levy|langevin) or file")
      ->required();
  solve->add_option("--z0", solve_z0, "initial state, comma separated");
  solve->add_option("--noise", solve_noise, "driving rough-path file")->required();
  solve->add_option("--out", solve_out, "output CSV of the trajectory")->required();
  solve->set_config("--config");

  // ---- roughness ----
  auto* rough = app.add_subcommand("roughness", "discrete Holder-roughness modulus");
  std::string rough_in, rough_out;
  double rough_theta = 0.45;
  int rough_nmax = 0, rough_sphere = 256;
  rough->add_option("--in", rough_in, "rough-path or sampled-path file")->required();
  rough->add_option("--theta", rough_theta, "roughness exponent")->required();
  rough->add_option("--nmax", rough_nmax, "deepest dyadic level (0 = auto)");
  rough->add_option("--sphere", rough_sphere, "direction-grid resolution");
  rough->add_option("--out", rough_out, "output JSON (default stdout)");
  rough->set_config("--config");

  // ---- norris ----
  auto* norris = app.add_subcommand(
      "norris", "Doob-Meyer certificate for a seeded instance over a driver");
  std::string norris_in, norris_out;
  double norris_theta = 0.45, norris_gamma = 0.35;
  std::uint64_t norris_seed = 0;
  norris->add_option("--in", norris_in, "driver rough-path file")->required();
  norris->add_option("--theta", norris_theta, "roughness exponent");
  norris->add_option("--gamma", norris_gamma, "Holder exponent");
  norris->add_option("--seed", norris_seed, "instance seed")->required();
  norris->add_option("--out", norris_out, "output JSON (default stdout)");
  norris->set_config("--config");

  // ---- hormander ----
  auto* horm = app.add_subcommand("hormander", "bracket-ladder rank check");
  std::string horm_system, horm_point = "0", horm_out;
  int horm_level = 2;
  horm->add_option("--system", horm_system, "built-in or file")->required();
  horm->add_option("--point", horm_point, "evaluation point, comma separated");
  horm->add_option("--max-level", horm_level, "deepest bracket level");
  horm->add_option("--out", horm_out, "output JSON (default stdout)");
  horm->set_config("--config");

  // ---- malliavin ----
  auto* mall = app.add_subcommand("malliavin", "reduced and full Malliavin matrices");
  std::string mall_system, mall_noise, mall_out, mall_z0 = "0";
  double mall_h = 0.4;
  mall->add_option("--system", mall_system, "built-in or file")->required();
  mall->add_option("--noise", mall_noise, "driving rough-path file")->required();
  mall->add_option("--hurst", mall_h, "Hurst parameter")->required();
  mall->add_option("--z0", mall_z0, "initial state");
  mall->add_option("--out", mall_out, "output JSON (default stdout)");
  mall->set_config("--config");

  // ---- tails ----
  auto* tails = app.add_subcommand("tails", "Monte-Carlo tail tables");
  tails->require_subcommand(1);
  auto* tails_rough = tails->add_subcommand("roughness", "P(D_theta < eps)");
  auto* tails_eigen = tails->add_subcommand("eigen", "P(lambda_min(M_T) <= eps)");
  double tr_h = 0.4, tr_theta = 0.45, tr_t1 = 1.0;
  int tr_n = 257, tr_samples = 2000, tr_dim = 1;
  std::uint64_t tr_seed = 0;
  std::string tr_eps = "0.05,0.1,0.15,0.2,0.3,0.5", tr_out;
  tails_rough->add_option("--hurst", tr_h)->required();
  tails_rough->add_option("--theta", tr_theta)->required();
  tails_rough->add_option("--n", tr_n, "grid nodes");
  tails_rough->add_option("--t1", tr_t1);
  tails_rough->add_option("--dim", tr_dim);
  tails_rough->add_option("--samples", tr_samples);
  tails_rough->add_option("--epsilons", tr_eps, "comma separated");
  tails_rough->add_option("--seed", tr_seed)->required();
  tails_rough->add_option("--out", tr_out, "output CSV")->required();
  tails_rough->set_config("--config");

  double te_h = 0.4, te_t1 = 1.0;
  int te_n = 65, te_level = 1, te_samples = 1000;
  std::uint64_t te_seed = 0;
  std::string te_system = "levy", te_eps = "0.0005,0.001,0.002,0.005,0.01,0.02",
              te_out;
  tails_eigen->add_option("--system", te_system);
  tails_eigen->add_option("--hurst", te_h)->required();
  tails_eigen->add_option("--t1", te_t1);
  tails_eigen->add_option("--n", te_n, "grid nodes");
  tails_eigen->add_option("--level", te_level);
  tails_eigen->add_option("--samples", te_samples);
  tails_eigen->add_option("--epsilons", te_eps, "comma separated");
  tails_eigen->add_option("--seed", te_seed)->required();
  tails_eigen->add_option("--out", te_out, "output CSV")->required();
  tails_eigen->set_config("--config");

  // ---- experiment ----
  auto* exp = app.add_subcommand("experiment", "run a packaged experiment");
  ExperimentConfig cfg;
  std::string exp_eps;
  exp->add_option("id", cfg.experiment,
                  "ou | levy | langevin | norris-suite | tails-roughness | tails-eigen")
      ->required();
  exp->add_option("--hurst", cfg.hurst);
  exp->add_option("--gamma", cfg.gamma);
  exp->add_option("--theta", cfg.theta);
  exp->add_option("--t1", cfg.t1);
  exp->add_option("--n", cfg.n_points);
  exp->add_option("--level", cfg.level);
  exp->add_option("--samples", cfg.n_samples);
  exp->add_option("--seed", cfg.seed)->required();
  exp->add_option("--out-dir", cfg.out_dir);
  exp->add_option("--ou-a", cfg.ou_a, "row-major entries of A");
  exp->add_option("--ou-c", cfg.ou_c, "row-major entries of C");
  exp->add_option("--ou-dim", cfg.ou_dim);
  exp->add_option("--ou-noise-dim", cfg.ou_noise_dim);
  exp->add_option("--levy-d", cfg.levy_d);
  exp->add_option("--kde-samples", cfg.kde_samples);
  exp->add_option("--kde-grid", cfg.kde_grid);
  exp->add_option("--langevin-dim", cfg.langevin.dim);
  exp->add_option("--kappa", cfg.langevin.kappa);
  exp->add_option("--bump-amp", cfg.langevin.bump_amp);
  exp->add_option("--bump-sigma", cfg.langevin.bump_sigma);
  exp->add_option("--steps", cfg.langevin_steps);
  exp->add_option("--window-points", cfg.window_points);
  exp->add_option("--past-windows", cfg.past_windows);
  exp->add_option("--lyapunov-gamma", cfg.lyapunov_gamma);
  exp->add_option("--burn-in", cfg.burn_in_fraction);
  exp->add_flag("--zero-noise", cfg.zero_noise);
  exp->add_option("--suite-dim", cfg.suite_dim);
  exp->add_flag("--calibrate", cfg.calibrate);
  exp->add_option("--epsilons", exp_eps, "comma separated");
  exp->add_option("--tails-system", cfg.tails_system);
  exp->set_config("--config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // malformed flags are configuration errors
  }

  if (fbm->parsed()) {
    const Grid grid(0.0, fbm_t1, fbm_n);
    if (fbm_past.empty()) {
      FbmSampler sampler(fbm_h, grid, fbm_seed, fbm_dim);
      write_rough_path_file(fbm_out, lift_fbm(sampler, fbm_level, fbm_gamma));
    } else {
      const SampledPath past = read_sampled_path_file(fbm_past);
      const NoiseRecord rec = sample_conditional_future(
          past, fbm_h, grid, fbm_seed, fbm_level, fbm_gamma);
      write_rough_path_file(fbm_out, rec.future_lift);
    }
    return 0;
  }

  if (solve->parsed()) {
    const VectorFieldSystem vfs = load_system(solve_system);
    const RoughPath noise = read_rough_path_file(solve_noise);
    Eigen::VectorXd z0 = parse_vector(solve_z0);
    if (z0.size() == 1 && vfs.dim_state() > 1) {
      z0 = Eigen::VectorXd::Constant(vfs.dim_state(), z0(0));
    }
    const ControlledPath sol = solve_rde(vfs, z0, noise);
    std::ofstream os(solve_out);
    if (!os) throw ConfigError("cannot open '" + solve_out + "'");
    os.precision(17);
    os << "t";
    for (int c = 0; c < vfs.dim_state(); ++c) os << ",z" << c + 1;
    os << "\n";
    for (int i = 0; i < sol.n_points(); ++i) {
      os << noise.grid().node(i);
      for (int c = 0; c < vfs.dim_state(); ++c) os << ',' << sol.values()(i, c);
      os << "\n";
    }
    return 0;
  }

  if (rough->parsed()) {
    std::ifstream is(rough_in);
    if (!is) throw ConfigError("cannot open '" + rough_in + "'");
    std::string head;
    std::getline(is, head);
    is.seekg(0);
    const SampledPath path = (head.rfind("# roughpath", 0) == 0)
                                 ? read_rough_path(is).path()
                                 : read_sampled_path(is);
    const int nmax = rough_nmax > 0 ? rough_nmax : default_n_max(path.grid());
    RoughnessOptions opts;
    opts.sphere_resolution = rough_sphere;
    emit(roughness_to_json(discrete_roughness(path, rough_theta, nmax, opts)),
         rough_out);
    return 0;
  }

  if (norris->parsed()) {
    const RoughPath driver = read_rough_path_file(norris_in);
    const NorrisInstance inst =
        make_norris_instance_for(driver, norris_theta, norris_seed);
    const NorrisCertificate cert =
        norris_bound(inst.a_controlled, inst.b_path, inst.driver, inst.report,
                     norris_gamma, calibrated::norris_m);
    json j;
    j["r_quantity"] = cert.r_quantity;
    j["z_sup"] = cert.z_sup;
    j["lhs"] = cert.lhs;
    j["q"] = cert.q;
    j["r"] = cert.r;
    j["beta"] = cert.beta;
    j["bound_value"] = cert.bound_value;
    j["calibration_m"] = cert.calibration_m;
    j["satisfied"] = cert.satisfied;
    j["roughness"] = roughness_to_json(inst.report);
    emit(j, norris_out);
    return 0;
  }

  if (horm->parsed()) {
    const VectorFieldSystem vfs = load_system(horm_system);
    Eigen::VectorXd z = parse_vector(horm_point);
    if (z.size() == 1 && vfs.dim_state() > 1) {
      z = Eigen::VectorXd::Constant(vfs.dim_state(), z(0));
    }
    const HormanderReport r = hormander_rank(vfs, z, horm_level);
    json j;
    j["rank"] = r.rank;
    j["dim_state"] = vfs.dim_state();
    j["full_rank_level"] =
        r.full_rank_level ? json(*r.full_rank_level) : json(nullptr);
    j["sigma_max"] = r.sigma_max;
    j["sigma_min"] = r.sigma_min;
    j["n_fields"] = r.n_fields;
    j["precision_warning"] = r.precision_warning;
    emit(j, horm_out);
    if (r.rank < vfs.dim_state()) {
      throw HypothesisError("hormander: bracket condition fails (rank " +
                            std::to_string(r.rank) + " of " +
                            std::to_string(vfs.dim_state()) + ")");
    }
    return 0;
  }

  if (mall->parsed()) {
    const VectorFieldSystem vfs = load_system(mall_system);
    const RoughPath noise = read_rough_path_file(mall_noise);
    Eigen::VectorXd z0 = parse_vector(mall_z0);
    if (z0.size() == 1 && vfs.dim_state() > 1) {
      z0 = Eigen::VectorXd::Constant(vfs.dim_state(), z0(0));
    }
    const FlowTriple flow = jacobian_flow(vfs, z0, noise);
    const MalliavinReport r = malliavin_report(flow, vfs, mall_h);
    json j;
    j["c_matrix"] = flat(r.c_matrix);
    j["m_matrix"] = flat(r.m_matrix);
    j["lambda_min_c"] = r.lambda_min_c;
    j["lambda_min_m"] = r.lambda_min_m;
    j["quadrature_n"] = r.quadrature_n;
    j["hurst"] = r.hurst;
    emit(j, mall_out);
    return 0;
  }

  if (tails_rough->parsed()) {
    const Grid grid(0.0, tr_t1, tr_n);
    const RoughnessTailTable table = roughness_tail_study(
        tr_h, tr_theta, tr_samples, parse_list(tr_eps), grid, tr_dim, tr_seed);
    if (!table.theta_above_hurst) {
      std::cerr << "warning: theta <= hurst; positivity of the modulus is not "
                   "guaranteed in this regime\n";
    }
    write_tail_csv(tr_out, table.rows);
    return 0;
  }

  if (tails_eigen->parsed()) {
    const EigenTailTable table =
        eigen_tail_study(te_system, te_h, te_t1, te_n, te_level, te_samples,
                         parse_list(te_eps), te_seed);
    write_tail_csv(te_out, table.rows);
    return 0;
  }

  if (exp->parsed()) {
    if (!exp_eps.empty()) cfg.epsilons = parse_list(exp_eps);
    if (cfg.epsilons.empty()) cfg.epsilons = {0.05, 0.1, 0.15, 0.2, 0.3, 0.5};
    const json report = run_experiment(cfg);
    if (cfg.out_dir.empty()) {
      std::cout << report.dump(2) << std::endl;
    } else {
      std::filesystem::create_directories(cfg.out_dir);
      std::ofstream os(cfg.out_dir + "/report.json");
      os << report.dump(2) << "\n";
      if (report.contains("rows")) {
        std::vector<TailRow> rows;
        for (const auto& r : report["rows"]) {
          rows.push_back({r["epsilon"], r["probability"], r["std_error"]});
        }
        write_tail_csv(cfg.out_dir + "/tails.csv", rows);
      }
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const roughlab::HypothesisError& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return 4;
  } catch (const roughlab::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const roughlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
}
