// cpd: synthetic data, distances and multiple change-point detection from the command line.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cpd/cli.hpp"
#include "cpd/errors.hpp"

namespace {

using namespace cpd;

cpd::Interval parse_interval(const std::string& text) {
  const auto v = cli::parse_real_list(text);
  if (v.size() != 2) throw ParseError("interval '" + text + "' must be given as low,high");
  return {static_cast<double>(v[0]), static_cast<double>(v[1])};
}

struct ProcessFlags {
  std::string alphas;
  std::string u1 = "0,0.7";
  std::string u2 = "0.3,1";
  std::string segment_laws;

  void add(CLI::App* app) {
    app->add_option("--alphas", alphas, "Rotation alphas, one per segment (cycled); default 0.1241..,0.1473..,0.1623..,0.1814..");
    app->add_option("--u1", u1, "First uniform interval low,high")->capture_default_str();
    app->add_option("--u2", u2, "Second uniform interval low,high")->capture_default_str();
    app->add_option("--segment-laws", segment_laws,
                    "Make segments i.i.d. uniform instead: low:high per segment, comma separated (cycled)");
  }

  cli::ProcessConfig resolve() const {
    cli::ProcessConfig c = cli::ProcessConfig::reference();
    if (!alphas.empty()) c.alphas = cli::parse_real_list(alphas);
    c.u1 = parse_interval(u1);
    c.u2 = parse_interval(u2);
    if (!segment_laws.empty()) c.segment_laws = cli::parse_interval_list(segment_laws);
    return c;
  }
};

struct DepthFlags {
  int m_max = 0;
  int l_max = 0;
  int l_cap = 20;

  void add(CLI::App* app) {
    app->add_option("--m-max", m_max, "Fixed gram-length depth (0 = derive per call)")->capture_default_str();
    app->add_option("--l-max", l_max, "Fixed resolution depth (0 = derive per call)")->capture_default_str();
    app->add_option("--l-cap", l_cap, "Cap on derived resolution depth")->capture_default_str()->check(CLI::PositiveNumber);
  }

  DepthPolicy resolve() const {
    DepthPolicy p;
    if (m_max > 0) p.m_max = m_max;
    if (l_max > 0) p.l_max = l_max;
    p.l_cap = l_cap;
    return p;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonparametric multiple change-point estimation for stationary ergodic time series"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a rotation-process sequence with random change points");
  cli::SynthConfig synth_cfg;
  ProcessFlags synth_proc;
  std::string synth_format = "text";
  synth->add_option("--n", synth_cfg.n, "Sequence length")->capture_default_str();
  synth->add_option("--kappa", synth_cfg.kappa, "Number of change points")->capture_default_str();
  synth->add_option("--lambda-min", synth_cfg.lambda_min, "Minimum separation of change-point parameters")->capture_default_str();
  synth->add_option("--seed", synth_cfg.seed, "Master seed")->capture_default_str();
  synth->add_option("--out", synth_cfg.out, "Series output file")->capture_default_str();
  synth->add_option("--truth", synth_cfg.truth, "Ground-truth output file")->capture_default_str();
  synth->add_option("--format", synth_format, "Series format: text or binary")->capture_default_str();
  synth_proc.add(synth);

  // detect
  auto* detect = app.add_subcommand("detect", "Estimate kappa change points in a series");
  cli::DetectConfig detect_cfg;
  DepthFlags detect_depths;
  std::string detect_format = "text";
  std::string detect_out;
  detect->add_option("input", detect_cfg.input, "Series file")->required();
  detect->add_option("--kappa", detect_cfg.kappa, "Number of change points")->capture_default_str();
  detect->add_option("--format", detect_format, "Series format: text or binary")->capture_default_str();
  detect->add_flag("--rescale", detect_cfg.rescale, "Map samples affinely onto [0, 1] first");
  detect->add_option("--out", detect_out, "Report file (default stdout)");
  detect_depths.add(detect);

  // distance
  auto* distance = app.add_subcommand("distance", "Empirical distributional distance between two series");
  cli::DistanceConfig distance_cfg;
  DepthFlags distance_depths;
  std::string distance_format = "text";
  distance->add_option("first", distance_cfg.first, "First series file")->required();
  distance->add_option("second", distance_cfg.second, "Second series file")->required();
  distance->add_option("--format", distance_format, "Series format: text or binary")->capture_default_str();
  distance->add_flag("--rescale", distance_cfg.rescale, "Map each series affinely onto [0, 1] first");
  distance_depths.add(distance);

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Monte Carlo error of the estimator as a function of n");
  cli::ExperimentConfig exp_cfg;
  ProcessFlags exp_proc;
  DepthFlags exp_depths;
  std::string exp_ns = "2000,5000,10000";
  std::string exp_out;
  experiment->add_option("--ns", exp_ns, "Comma-separated sequence lengths")->capture_default_str();
  experiment->add_option("--runs", exp_cfg.runs, "Runs per length")->capture_default_str();
  experiment->add_option("--kappa", exp_cfg.kappa, "Number of change points")->capture_default_str();
  experiment->add_option("--lambda-min", exp_cfg.lambda_min, "Minimum separation of change-point parameters")->capture_default_str();
  experiment->add_option("--seed", exp_cfg.seed, "Master seed")->capture_default_str();
  experiment->add_option("--threads", exp_cfg.threads, "Worker threads (results do not depend on it)")->capture_default_str();
  experiment->add_option("--out", exp_out, "CSV output file (default stdout)");
  exp_proc.add(experiment);
  exp_depths.add(experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cli::kConfigError;
  }

  try {
    if (*synth) {
      synth_cfg.format = cli::parse_format(synth_format);
      synth_cfg.processes = synth_proc.resolve();
      return cli::cmd_synth(synth_cfg, std::cerr);
    }
    if (*detect) {
      detect_cfg.format = cli::parse_format(detect_format);
      detect_cfg.depths = detect_depths.resolve();
      if (!detect_out.empty()) detect_cfg.out = detect_out;
      return cli::cmd_detect(detect_cfg, std::cout, std::cerr);
    }
    if (*distance) {
      distance_cfg.format = cli::parse_format(distance_format);
      distance_cfg.depths = distance_depths.resolve();
      return cli::cmd_distance(distance_cfg, std::cout, std::cerr);
    }
    if (*experiment) {
      exp_cfg.ns = cli::parse_size_list(exp_ns);
      exp_cfg.processes = exp_proc.resolve();
      exp_cfg.depths = exp_depths.resolve();
      if (!exp_out.empty()) exp_cfg.out = exp_out;
      return cli::cmd_experiment(exp_cfg, std::cout, std::cerr);
    }
  } catch (const ParseError& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return cli::kConfigError;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return cli::kConfigError;
  }
  return cli::kFailure;
}
