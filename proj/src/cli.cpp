#include "cpd/cli.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "cpd/errors.hpp"
#include "cpd/rng.hpp"

namespace cpd::cli {

namespace {

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::ofstream open_output(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::kOk: return "ok";
    case RunStatus::kNoSignal: return "no_signal";
    case RunStatus::kError: return "error";
  }
  return "error";
}

// Maps library exceptions onto the documented exit codes.
template <typename F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    log << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const InvalidInput& e) {
    log << "invalid configuration: " << e.what() << "\n";
    return kConfigError;
  } catch (const NoSignal& e) {
    log << "no signal: " << e.what() << "\n";
    return kNoSignal;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace

SeriesFormat parse_format(const std::string& name) {
  if (name == "text") return SeriesFormat::kText;
  if (name == "binary") return SeriesFormat::kBinary;
  throw InvalidInput("unknown series format '" + name + "' (expected text or binary)");
}

std::vector<double> read_series(std::istream& in, SeriesFormat format) {
  std::vector<double> x;
  if (format == SeriesFormat::kBinary) {
    static_assert(std::endian::native == std::endian::little, "binary series format assumes a little-endian host");
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() % sizeof(double) != 0) throw ParseError("binary series length is not a multiple of 8 bytes");
    x.resize(bytes.size() / sizeof(double));
    std::memcpy(x.data(), bytes.data(), bytes.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(x[i])) throw ParseError("binary sample " + std::to_string(i + 1) + " is not finite");
    }
  } else {
    std::string line;
    std::size_t lineno = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string field = trim(line);
      if (field.empty()) continue;
      if (!seen_data && x.empty() && field == "value") {
        seen_data = true;
        continue;
      }
      seen_data = true;
      double v = 0.0;
      const char* begin = field.data();
      const char* end = begin + field.size();
      const auto [ptr, ec] = std::from_chars(begin, end, v);
      if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ParseError("line " + std::to_string(lineno) + ": '" + field + "' is not a finite real");
      }
      x.push_back(v);
    }
  }
  if (x.empty()) throw ParseError("series holds no samples");
  return x;
}

std::vector<double> read_series(const std::filesystem::path& path, SeriesFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_series(in, format);
}

void write_series(std::ostream& out, std::span<const double> x, SeriesFormat format) {
  if (format == SeriesFormat::kBinary) {
    out.write(reinterpret_cast<const char*>(x.data()), static_cast<std::streamsize>(x.size_bytes()));
    return;
  }
  out << "value\n";
  for (double v : x) out << real(v) << "\n";
}

void write_series(const std::filesystem::path& path, std::span<const double> x, SeriesFormat format) {
  auto out = open_output(path, std::ios::out | std::ios::binary);
  write_series(out, x, format);
}

std::vector<double> rescale_unit(std::span<const double> x) {
  if (x.empty()) return {};
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double low = *lo;
  const double range = *hi - *lo;
  std::vector<double> y;
  y.reserve(x.size());
  for (double v : x) y.push_back(range > 0.0 ? (v - low) / range : 0.0);
  return y;
}

void write_truth(std::ostream& out, const ChangePointTruth& truth, std::size_t n) {
  out << "kappa " << truth.kappa() << "\n";
  out << "n " << n << "\n";
  out << "lambda_min " << real(truth.lambda_min) << "\n";
  out << "theta";
  for (double th : truth.theta) out << " " << real(th);
  out << "\nchange_point";
  for (double th : truth.theta) out << " " << static_cast<std::size_t>(std::floor(static_cast<double>(n) * th));
  out << "\n";
}

void write_report(std::ostream& out, const EstimateReport& report, std::optional<std::uint64_t> seed) {
  auto depth = [](const std::optional<int>& d) { return d ? std::to_string(*d) : std::string("auto"); };
  out << "# change-point estimate\n";
  out << "kappa " << report.kappa << "\n";
  out << "n " << report.n << "\n";
  out << "m_max " << depth(report.depths.m_max) << "\n";
  out << "l_max " << depth(report.depths.l_max) << "\n";
  out << "l_cap " << report.depths.l_cap << "\n";
  if (seed) out << "seed " << *seed << "\n";
  out << "eta " << real(report.eta) << "\n";
  out << "theta_hat";
  for (double th : report.theta_hat) out << " " << real(th);
  out << "\n";
  out << "grids " << report.grids.size() << "\n";
  out << "# grid <j> <t> <weight> <gamma> <candidates...>\n";
  for (const auto& g : report.grids) {
    out << "grid " << g.j << " " << g.t << " " << real(g.weight) << " " << real(g.gamma);
    for (auto c : g.candidates) out << " " << c;
    out << "\n";
  }
}

std::vector<long double> parse_real_list(const std::string& text) {
  std::vector<long double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string field = trim(item);
    if (field.empty()) throw ParseError("empty entry in list '" + text + "'");
    char* end = nullptr;
    const long double v = std::strtold(field.c_str(), &end);
    if (end != field.c_str() + field.size() || !std::isfinite(v)) throw ParseError("'" + field + "' is not a real number");
    values.push_back(v);
  }
  if (values.empty()) throw ParseError("empty list");
  return values;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string field = trim(item);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
      throw ParseError("'" + field + "' is not a nonnegative integer");
    }
    values.push_back(v);
  }
  if (values.empty()) throw ParseError("empty list");
  return values;
}

std::vector<Interval> parse_interval_list(const std::string& text) {
  std::vector<Interval> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ParseError("interval '" + trim(item) + "' must be given as low:high");
    const auto low = parse_real_list(item.substr(0, colon));
    const auto high = parse_real_list(item.substr(colon + 1));
    if (low.size() != 1 || high.size() != 1) throw ParseError("interval '" + trim(item) + "' must be given as low:high");
    const Interval u{static_cast<double>(low[0]), static_cast<double>(high[0])};
    if (!(u.low < u.high)) throw InvalidInput("interval '" + trim(item) + "' needs low < high");
    out.push_back(u);
  }
  if (out.empty()) throw ParseError("empty interval list");
  return out;
}

ProcessConfig ProcessConfig::reference() {
  ProcessConfig c;
  for (const auto& spec : reference_processes()) c.alphas.push_back(spec.alpha);
  return c;
}

std::vector<RotationProcessSpec> ProcessConfig::specs(std::size_t kappa) const {
  if (alphas.empty()) throw InvalidInput("at least one rotation alpha is required");
  std::vector<RotationProcessSpec> out;
  for (std::size_t k = 0; k <= kappa; ++k) {
    RotationProcessSpec spec{alphas[k % alphas.size()], u1, u2, 0};
    if (!segment_laws.empty()) spec.u1 = spec.u2 = segment_laws[k % segment_laws.size()];
    validate(spec);
    if (!out.empty() && out.back().alpha == spec.alpha) {
      throw InvalidInput("consecutive segments would share rotation alpha; give at least two distinct alphas");
    }
    out.push_back(spec);
  }
  return out;
}

std::uint64_t cell_seed(std::uint64_t master, std::size_t n, std::size_t run) {
  return derive_seed(derive_seed(master, n), run);
}

std::vector<RunResult> run_experiment(const ExperimentConfig& config) {
  if (config.runs < 1) throw InvalidInput("runs must be >= 1");
  if (config.ns.empty()) throw InvalidInput("at least one sequence length is required");
  const auto specs = config.processes.specs(config.kappa);
  // Surface an infeasible layout before any work starts.
  (void)random_changepoints(config.kappa, config.lambda_min, 0);

  const std::size_t cells = config.ns.size() * config.runs;
  std::vector<RunResult> results(cells);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < cells; c = next++) {
      RunResult& r = results[c];
      r.n = config.ns[c / config.runs];
      r.run = c % config.runs;
      const std::uint64_t seed = cell_seed(config.seed, r.n, r.run);
      try {
        const auto truth = random_changepoints(config.kappa, config.lambda_min, derive_seed(seed, 0));
        r.theta_true = truth.theta;
        const auto seq = compose_sequence(r.n, truth, specs, derive_seed(seed, 1));
        const auto report = estimate_changepoints(seq.series, config.kappa, config.depths);
        r.theta_hat = report.theta_hat;
        r.total_error = error_rate(report, truth);
      } catch (const NoSignal&) {
        r.status = RunStatus::kNoSignal;
      } catch (const std::exception&) {
        r.status = RunStatus::kError;
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(config.threads, 1, cells);
  std::vector<std::jthread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  return results;
}

void write_experiment_csv(std::ostream& out, std::span<const RunResult> results) {
  out << "n,run,k,theta_true,theta_hat,abs_error,total_error,status\n";
  for (const auto& r : results) {
    const bool ok = r.status == RunStatus::kOk;
    for (std::size_t k = 0; k < r.theta_true.size(); ++k) {
      out << r.n << "," << r.run << "," << (k + 1) << "," << real(r.theta_true[k]) << ",";
      if (ok) {
        out << real(r.theta_hat[k]) << "," << real(std::abs(r.theta_hat[k] - r.theta_true[k])) << ","
            << real(r.total_error);
      } else {
        out << "nan,nan,nan";
      }
      out << "," << status_name(r.status) << "\n";
    }
  }
}

int cmd_synth(const SynthConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    const auto specs = config.processes.specs(config.kappa);
    const auto truth = random_changepoints(config.kappa, config.lambda_min, derive_seed(config.seed, 0));
    const auto seq = compose_sequence(config.n, truth, specs, derive_seed(config.seed, 1));
    write_series(config.out, seq.series.samples(), config.format);
    auto truth_out = open_output(config.truth);
    write_truth(truth_out, truth, config.n);
    truth_out << "seed " << config.seed << "\n";
    return static_cast<int>(kOk);
  });
}

int cmd_detect(const DetectConfig& config, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    auto samples = read_series(config.input, config.format);
    if (config.rescale) samples = rescale_unit(samples);
    const TimeSeries x(std::move(samples));
    const auto report = estimate_changepoints(x, config.kappa, config.depths);
    if (config.out) {
      auto file = open_output(*config.out);
      write_report(file, report);
    } else {
      write_report(out, report);
    }
    return static_cast<int>(kOk);
  });
}

int cmd_distance(const DistanceConfig& config, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    auto a = read_series(config.first, config.format);
    auto b = read_series(config.second, config.format);
    if (config.rescale) {
      a = rescale_unit(a);
      b = rescale_unit(b);
    }
    std::vector<double> both(a);
    both.insert(both.end(), b.begin(), b.end());
    const auto params = resolve_depths(both, std::min(a.size(), b.size()), config.depths);
    out << "m_max " << params.m_max << "\n";
    out << "l_max " << params.l_max << "\n";
    out << "distance " << real(empirical_distance(a, b, params)) << "\n";
    return static_cast<int>(kOk);
  });
}

int cmd_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    const auto results = run_experiment(config);
    if (config.out) {
      auto file = open_output(*config.out);
      write_experiment_csv(file, results);
    } else {
      write_experiment_csv(out, results);
    }
    for (std::size_t i = 0; i < config.ns.size(); ++i) {
      double sum = 0.0;
      std::size_t ok = 0;
      for (std::size_t r = 0; r < config.runs; ++r) {
        const auto& res = results[i * config.runs + r];
        if (res.status != RunStatus::kOk) continue;
        sum += res.total_error;
        ++ok;
      }
      log << "n=" << config.ns[i] << " runs_ok=" << ok << "/" << config.runs
          << " mean_total_error=" << (ok ? real(sum / static_cast<double>(ok)) : std::string("nan")) << "\n";
    }
    return static_cast<int>(kOk);
  });
}

}  // namespace cpd::cli
