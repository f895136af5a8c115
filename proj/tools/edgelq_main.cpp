// Command-line front end: scenario files in, trajectory CSVs and JSON
// reports out. Subcommands: solve, baseline, verify, spectral,
// example-paper. Exit codes: 0 success, 1 configuration problem, 2
// singular or ill-conditioned boundary problem, 3 verification failure
// (the report file is still written).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "edgelq/closed_form.hpp"
#include "edgelq/config.hpp"
#include "edgelq/csv.hpp"
#include "edgelq/edge_system.hpp"
#include "edgelq/errors.hpp"
#include "edgelq/game.hpp"
#include "edgelq/reconstruct.hpp"
#include "edgelq/simulate.hpp"
#include "edgelq/spectral.hpp"
#include "edgelq/tpbvp.hpp"

namespace {

using edgelq::ClosedFormSolution;
using edgelq::DelayFreeSystem;
using edgelq::EdgeSystem;
using edgelq::Formulation;
using edgelq::GameSpec;
using edgelq::TransitionFamily;
using edgelq::Trajectory;
using edgelq::Vec;
using nlohmann::json;

struct Options {
  std::string config;
  std::string out_dir = ".";
  std::optional<double> tau;
  int samples = 401;
  double step = 1e-3;
  std::uint64_t seed = 2027;
};

void add_common_flags(CLI::App* cmd, Options* opt, bool needs_config) {
  if (needs_config) {
    cmd->add_option("--config", opt->config, "scenario file (JSON)")
        ->required();
  }
  cmd->add_option("--out-dir", opt->out_dir, "output directory");
  cmd->add_option("--tau", opt->tau, "override the input delay");
  cmd->add_option("--samples", opt->samples, "output grid size")
      ->check(CLI::Range(2, 1000000));
  cmd->add_option("--step", opt->step, "integration step for checks")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt->seed, "seed for perturbation probes");
}

GameSpec apply_tau(const GameSpec& spec, double tau) {
  try {
    return make_game_spec(spec.graph, spec.weights, spec.q, tau,
                          spec.horizon, spec.pos0, spec.vel0, spec.leader);
  } catch (const std::exception& err) {
    throw edgelq::ConfigError(std::string("config with --tau override: ") +
                              err.what());
  }
}

GameSpec load_spec(const Options& opt) {
  GameSpec spec = edgelq::load_game_config(opt.config);
  if (opt.tau) spec = apply_tau(spec, *opt.tau);
  return spec;
}

void write_json(const std::filesystem::path& path, const json& value) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  out << value.dump(2) << "\n";
}

json complex_pair(const edgelq::Complex& z) {
  return json::array({z.real(), z.imag()});
}

json vec_to_json(const Vec& v) {
  json arr = json::array();
  for (int k = 0; k < v.size(); ++k) arr.push_back(v(k));
  return arr;
}

json metadata_json(const GameSpec& spec, const ClosedFormSolution& sol,
                   int samples) {
  json meta;
  meta["formulation"] = edgelq::formulation_name(sol.metadata().formulation);
  meta["variant"] = edgelq::formula_variant_name(sol.metadata().variant);
  meta["variant_deviation"] = {
      {"whole_re", sol.metadata().deviation_whole},
      {"factored_re", sol.metadata().deviation_factored},
  };
  json lambdas = json::array();
  for (const auto& lam : sol.metadata().lambda) {
    lambdas.push_back(complex_pair(lam));
  }
  meta["lambda"] = lambdas;
  json deltas = json::array();
  for (double d : sol.metadata().delta) deltas.push_back(d);
  meta["delta"] = deltas;
  meta["tau"] = spec.tau;
  meta["horizon"] = spec.horizon;
  meta["q"] = spec.q;
  meta["edges"] = spec.graph.edge_count();
  meta["agents"] = spec.agents();
  meta["samples"] = samples;
  return meta;
}

int run_solve(const GameSpec& spec, const Options& opt) {
  const EdgeSystem es = edgelq::to_edge_system(spec);
  const DelayFreeSystem dfs = edgelq::eliminate_delay(es);
  const ClosedFormSolution sol =
      ClosedFormSolution::build(dfs, Formulation::delay_compensated);
  const Trajectory traj = edgelq::reconstruct_nodes(
      spec, edgelq::edge_source(sol), opt.samples);

  std::filesystem::create_directories(opt.out_dir);
  edgelq::write_trajectory_csv(
      (std::filesystem::path(opt.out_dir) / "solution.csv").string(), traj);

  json meta = metadata_json(spec, sol, opt.samples);
  const edgelq::PerformanceReport perf =
      edgelq::evaluate_performance(spec, traj);
  meta["performance_total"] = vec_to_json(perf.total);
  const Vec series = edgelq::total_consensus_series(spec, traj);
  meta["consensus_initial"] = series(0);
  meta["consensus_terminal"] = series(series.size() - 1);
  write_json(std::filesystem::path(opt.out_dir) / "solution.json", meta);
  return 0;
}

int run_baseline(const GameSpec& spec, const Options& opt) {
  const EdgeSystem es = edgelq::to_edge_system(spec);
  const DelayFreeSystem dfs = edgelq::eliminate_delay(es);
  const TransitionFamily tf =
      TransitionFamily::build(dfs, Formulation::delay_compensated);
  const Vec coeff = tf.boundary_coefficients(dfs.y0);

  edgelq::EdgeTrajectorySource src;
  src.m = es.m;
  src.q = es.q;
  src.tau = es.tau;
  src.horizon = es.horizon;
  const double tau = es.tau;
  const Vec z0 = es.z0;
  const int mq = es.m * es.q;
  src.z = [&tf, coeff, tau, z0, mq](double t) -> Vec {
    Vec z(2 * mq);
    if (t < tau) {
      z.head(mq) = z0.head(mq) + t * z0.tail(mq);
      z.tail(mq) = z0.tail(mq);
      return z;
    }
    const Vec y = tf.state_at(t - tau, coeff);
    z.head(mq) = y.head(mq) + tau * y.tail(mq);
    z.tail(mq) = y.tail(mq);
    return z;
  };
  src.xi = [&tf, coeff](double s) { return tf.control_at(s, coeff); };

  Trajectory traj = edgelq::reconstruct_nodes(spec, src, opt.samples);
  traj.provenance = Trajectory::Provenance::baseline;

  std::filesystem::create_directories(opt.out_dir);
  edgelq::write_trajectory_csv(
      (std::filesystem::path(opt.out_dir) / "baseline.csv").string(), traj);

  json meta;
  meta["h_condition"] = tf.h_condition();
  meta["tau"] = spec.tau;
  meta["horizon"] = spec.horizon;
  meta["q"] = spec.q;
  meta["edges"] = spec.graph.edge_count();
  meta["agents"] = spec.agents();
  meta["samples"] = opt.samples;
  write_json(std::filesystem::path(opt.out_dir) / "baseline.json", meta);
  return 0;
}

int run_verify(const GameSpec& spec, const Options& opt) {
  const edgelq::VerificationReport report =
      edgelq::run_verification(spec, opt.samples, opt.step, opt.seed);

  json checks = json::object();
  for (const auto& c : report.checks) {
    json entry;
    entry["gate"] = c.gate;
    entry["passed"] = c.passed;
    entry["value"] = c.value;
    entry["threshold"] = c.threshold;
    entry["detail"] = c.detail;
    if (c.name == "oracle_equivalence") entry["max_rel_err"] = c.value;
    checks[c.name] = entry;
  }
  json doc;
  doc["checks"] = checks;
  doc["all_gated_passed"] = report.all_gated_passed();
  doc["tau"] = spec.tau;
  doc["samples"] = opt.samples;
  doc["step"] = opt.step;
  doc["seed"] = opt.seed;

  std::filesystem::create_directories(opt.out_dir);
  write_json(std::filesystem::path(opt.out_dir) / "report.json", doc);
  if (!report.all_gated_passed()) {
    std::cerr << "verification failed; see report.json\n";
    return 3;
  }
  return 0;
}

int run_spectral(const GameSpec& spec, const Options& opt) {
  const EdgeSystem es = edgelq::to_edge_system(spec);
  const DelayFreeSystem dfs = edgelq::eliminate_delay(es);

  json doc;
  doc["tau"] = spec.tau;
  json forms = json::object();
  for (Formulation f : {Formulation::velocity_coupled,
                        Formulation::delay_compensated}) {
    const edgelq::HamiltonianMatrix h = edgelq::assemble_M(dfs, f);
    const edgelq::EdgeSpectrum spectrum = edgelq::edge_eigenvalues(h);
    const edgelq::JordanReport jordan = edgelq::verify_jordan_structure(h);
    json entry;
    entry["spectral_tau"] = h.spectral_tau();
    json lambdas = json::array();
    json weights = json::array();
    for (int e = 0; e < h.edge_count; ++e) {
      lambdas.push_back(complex_pair(spectrum.lambda[e]));
      weights.push_back(complex_pair(spectrum.varpi_sq[e]));
    }
    entry["lambda"] = lambdas;
    entry["varpi_sq"] = weights;
    entry["jordan"] = {
        {"null_dim", jordan.null_dim},
        {"null_dim_sq", jordan.null_dim_sq},
        {"null_dim_cube", jordan.null_dim_cube},
        {"min_gap", jordan.min_gap},
        {"gap_ok", jordan.gap_ok},
        {"nonzero_simple", jordan.nonzero_simple},
        {"char_poly_rel_err", jordan.char_poly_rel_err},
    };
    json modes = json::array();
    for (const edgelq::ModeResidual& r : edgelq::mode_residuals(h)) {
      modes.push_back({
          {"edge", r.edge},
          {"lambda", complex_pair(r.lambda)},
          {"quartic", r.quartic},
          {"right", r.right},
          {"left", r.left},
          {"normalization", r.normalization},
      });
    }
    entry["modes"] = modes;
    forms[edgelq::formulation_name(f)] = entry;
  }
  doc["formulations"] = forms;

  std::filesystem::create_directories(opt.out_dir);
  write_json(std::filesystem::path(opt.out_dir) / "spectral.json", doc);
  return 0;
}

int run_example(const Options& opt) {
  int worst = 0;
  const auto run_one = [&](double tau, const std::string& dir) {
    const GameSpec spec = edgelq::consensus_example(tau);
    Options local = opt;
    local.out_dir = dir;
    int code = run_solve(spec, local);
    code = std::max(code, run_baseline(spec, local));
    code = std::max(code, run_spectral(spec, local));
    code = std::max(code, run_verify(spec, local));
    worst = std::max(worst, code);
  };
  if (opt.tau) {
    run_one(*opt.tau, opt.out_dir);
  } else {
    run_one(0.0, (std::filesystem::path(opt.out_dir) / "tau0").string());
    run_one(0.5, (std::filesystem::path(opt.out_dir) / "tau05").string());
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Distributed linear-quadratic consensus games with input delay: "
      "closed-form edge solutions, baselines, and verification"};
  app.require_subcommand(1);

  Options solve_opt, baseline_opt, verify_opt, spectral_opt, example_opt;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "closed-form solution and trajectories");
  add_common_flags(solve_cmd, &solve_opt, true);
  CLI::App* baseline_cmd = app.add_subcommand(
      "baseline", "matrix-exponential boundary-value solution");
  add_common_flags(baseline_cmd, &baseline_opt, true);
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "full verification report");
  add_common_flags(verify_cmd, &verify_opt, true);
  CLI::App* spectral_cmd =
      app.add_subcommand("spectral", "spectral structure report");
  add_common_flags(spectral_cmd, &spectral_opt, true);
  CLI::App* example_cmd = app.add_subcommand(
      "example-paper",
      "bundled consensus scenario, delay-free and delayed runs");
  add_common_flags(example_cmd, &example_opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) {
      return run_solve(load_spec(solve_opt), solve_opt);
    }
    if (baseline_cmd->parsed()) {
      return run_baseline(load_spec(baseline_opt), baseline_opt);
    }
    if (verify_cmd->parsed()) {
      return run_verify(load_spec(verify_opt), verify_opt);
    }
    if (spectral_cmd->parsed()) {
      return run_spectral(load_spec(spectral_opt), spectral_opt);
    }
    if (example_cmd->parsed()) {
      return run_example(example_opt);
    }
  } catch (const edgelq::SingularBoundaryError& err) {
    std::cerr << "boundary problem: " << err.what() << "\n";
    return 2;
  } catch (const edgelq::ConfigError& err) {
    std::cerr << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 1;
}
