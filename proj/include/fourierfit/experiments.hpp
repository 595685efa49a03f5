#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fourierfit/io.hpp"
#include "fourierfit/oracle.hpp"
#include "fourierfit/version.hpp"

namespace fourierfit {

/// Carries every problem found while checking a config, so a user can fix the
/// whole file in one pass instead of replaying one error at a time.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const { return issues_; }

  Json report() const {
    Json j;
    j["error"] = "validation";
    j["issues"] = issues_;
    return j;
  }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string msg = "config validation failed:";
    for (const std::string& issue : issues) msg += "\n  - " + issue;
    return msg;
  }
  std::vector<std::string> issues_;
};

struct RunContext {
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::int64_t jobs = 1;
};

struct ExperimentOutcome {
  std::vector<std::string> files;
};

namespace detail {

/// Index-chunked worker pool. Results must be written into per-index slots by
/// the callback; the pool itself adds no ordering effects, so output bytes do
/// not depend on the job count.
template <class Fn>
inline void parallel_for(std::int64_t count, std::int64_t jobs, Fn&& fn) {
  if (count <= 0) return;
  jobs = std::max<std::int64_t>(1, std::min<std::int64_t>(jobs, count));
  if (jobs == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (std::int64_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&]() {
      while (!stop.load()) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= count) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> guard(error_mutex);
          if (!first_error) first_error = std::current_exception();
          stop.store(true);
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

class IssueList {
 public:
  void check(bool ok, const std::string& message) {
    if (!ok) issues_.push_back(message);
  }
  void add(const std::string& message) { issues_.push_back(message); }
  template <class Fn>
  bool attempt(Fn&& fn, const std::string& context) {
    try {
      fn();
      return true;
    } catch (const std::exception& e) {
      issues_.push_back(context + ": " + e.what());
      return false;
    }
  }
  void finish() const {
    if (!issues_.empty()) throw ValidationError(issues_);
  }
  bool clean() const { return issues_.empty(); }

 private:
  std::vector<std::string> issues_;
};

inline std::string sanitize_name(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? std::string("unnamed") : out;
}

inline std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

inline void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " +
                      ec.message());
}

inline Json base_sidecar(const std::string& kind, const Json& config,
                         const RunContext& ctx) {
  Json j;
  j["experiment"] = kind;
  j["version"] = kVersion;
  j["seed"] = ctx.seed;
  j["config"] = config;
  return j;
}

struct CsvTable {
  explicit CsvTable(const std::string& header) { text = header + "\n"; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) text += ",";
      text += cells[i];
    }
    text += "\n";
  }
  std::string text;
};

inline std::string cell(double v) { return format_double(v); }
inline std::string cell(std::int64_t v) { return std::to_string(v); }

}  // namespace detail

// ---------------------------------------------------------------------------
// classical-fit (subcommand `fit`): one minimum-norm fit, dense model curve.
// ---------------------------------------------------------------------------

struct ClassicalFitConfig {
  std::int64_t n = 0;
  WeightProfile weights;
  TargetSpec target;
  double sigma = 0.0;
  NoiseKind noise_kind = NoiseKind::gaussian;
  std::int64_t curve_points = 1000;
};

inline ClassicalFitConfig parse_classical_fit(const Json& config) {
  detail::IssueList issues;
  ClassicalFitConfig out;
  issues.check(config.is_object(), "config must be a JSON object");
  issues.finish();

  issues.attempt([&] { out.n = detail::int_field(config, "n"); }, "n");
  issues.check(out.n >= 1 && is_odd(out.n), "n must be a positive odd integer");
  issues.check(config.contains("weights"), "missing 'weights' spec");
  if (config.contains("weights")) {
    issues.attempt([&] { out.weights = weights_from_json(config.at("weights")); },
                   "weights");
  }
  issues.check(config.contains("target"), "missing 'target' spec");
  if (config.contains("target")) {
    issues.attempt([&] { out.target = target_from_json(config.at("target")); },
                   "target");
  }
  if (config.contains("sigma")) {
    issues.attempt([&] { out.sigma = detail::number_field(config, "sigma"); },
                   "sigma");
  }
  issues.check(out.sigma >= 0.0, "sigma must be nonnegative");
  if (config.contains("noise_kind")) {
    issues.attempt(
        [&] {
          out.noise_kind = noise_kind_from_string(
              detail::string_field(config, "noise_kind"));
        },
        "noise_kind");
  }
  if (config.contains("curve_points")) {
    issues.attempt(
        [&] { out.curve_points = detail::int_field(config, "curve_points"); },
        "curve_points");
  }
  issues.check(out.curve_points >= 2, "curve_points must be at least 2");
  if (out.n >= 1 && is_odd(out.n)) {
    issues.check(out.target.band_limit() <= 2 * out.weights.max_frequency() + 1 ||
                     out.target.series.empty() ||
                     out.target.band_limit() <= out.n,
                 "target band exceeds both the sample window and the weight "
                 "support");
  }
  issues.finish();
  return out;
}

inline ExperimentOutcome run_classical_fit(const Json& config,
                                           const RunContext& ctx) {
  const ClassicalFitConfig cfg = parse_classical_fit(config);
  detail::ensure_out_dir(ctx.out_dir);

  std::mt19937_64 engine = make_stream(ctx.seed, 0);
  const SampleSet samples =
      sample_target(cfg.target, cfg.n, cfg.sigma, engine, cfg.noise_kind);
  const TrainedModel model = min_norm_fit(samples, cfg.weights);

  detail::CsvTable curve("x,f,g");
  double max_imag = 0.0;
  for (std::int64_t i = 0; i < cfg.curve_points; ++i) {
    const double x =
        static_cast<double>(i) / static_cast<double>(cfg.curve_points);
    double imag = 0.0;
    const double f = model.evaluate_real(x, &imag);
    max_imag = std::max(max_imag, imag);
    const double g = cfg.target.series.evaluate(x).real();
    curve.row({detail::cell(x), detail::cell(f), detail::cell(g)});
  }

  detail::CsvTable sample_rows("x,y_re,y_im");
  for (std::int64_t j = 0; j < cfg.n; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(cfg.n);
    const Complex y = samples.values[static_cast<std::size_t>(j)];
    sample_rows.row(
        {detail::cell(x), detail::cell(y.real()), detail::cell(y.imag())});
  }

  const std::string curve_path = detail::join_path(ctx.out_dir, "fit_curve.csv");
  const std::string samples_path =
      detail::join_path(ctx.out_dir, "fit_samples.csv");
  const std::string sidecar_path = detail::join_path(ctx.out_dir, "fit.json");
  write_text_file(curve_path, curve.text);
  write_text_file(samples_path, sample_rows.text);

  Json sidecar = detail::base_sidecar("classical-fit", config, ctx);
  sidecar["coefficient_norm_sq"] = model.coefficient_norm_sq();
  sidecar["max_imag_f"] = max_imag;
  sidecar["files"] = Json::array({"fit_curve.csv", "fit_samples.csv"});
  write_text_file(sidecar_path, sidecar.dump(2) + "\n");

  return ExperimentOutcome{{curve_path, samples_path, sidecar_path}};
}

// ---------------------------------------------------------------------------
// error-sweep (subcommand `sweep`): closed-form VAR/BIAS² across a d-schedule
// of hat-weight models, optionally cross-checked by Monte Carlo.
// ---------------------------------------------------------------------------

struct ErrorSweepConfig {
  std::int64_t n0 = 0;
  std::int64_t n = 0;
  double c = 0.5;
  double sigma_sq = 0.0;
  TargetSpec target;
  std::vector<std::int64_t> d_list;
  bool with_mc = false;
  McConfig mc;
};

inline ErrorSweepConfig parse_error_sweep(const Json& config) {
  detail::IssueList issues;
  ErrorSweepConfig out;
  issues.check(config.is_object(), "config must be a JSON object");
  issues.finish();

  issues.attempt([&] { out.n0 = detail::int_field(config, "n0"); }, "n0");
  issues.attempt([&] { out.n = detail::int_field(config, "n"); }, "n");
  issues.attempt([&] { out.c = detail::number_field(config, "c"); }, "c");
  issues.attempt(
      [&] { out.sigma_sq = detail::number_field(config, "sigma_sq"); },
      "sigma_sq");
  issues.check(out.n >= 1 && is_odd(out.n), "n must be a positive odd integer");
  issues.check(out.n0 >= 1 && is_odd(out.n0),
               "n0 must be a positive odd integer");
  issues.check(out.c > 0.0 && out.c < 1.0, "c must lie strictly inside (0,1)");
  issues.check(out.sigma_sq >= 0.0, "sigma_sq must be nonnegative");
  issues.check(config.contains("target"), "missing 'target' spec");
  if (config.contains("target")) {
    issues.attempt([&] { out.target = target_from_json(config.at("target")); },
                   "target");
  }

  if (config.contains("d_list")) {
    issues.attempt(
        [&] {
          for (const Json& v : config.at("d_list")) {
            require(v.is_number_integer(), "d_list must contain integers");
            out.d_list.push_back(v.get<std::int64_t>());
          }
        },
        "d_list");
  } else if (config.contains("d_max")) {
    std::int64_t d_max = 0;
    issues.attempt([&] { d_max = detail::int_field(config, "d_max"); },
                   "d_max");
    if (out.n >= 1 && is_odd(out.n)) {
      issues.check(d_max >= out.n, "d_max must be at least n");
      for (std::int64_t d = out.n; d <= d_max; d += 2) out.d_list.push_back(d);
    }
  } else {
    issues.add("provide either 'd_list' or 'd_max'");
  }
  std::sort(out.d_list.begin(), out.d_list.end());
  out.d_list.erase(std::unique(out.d_list.begin(), out.d_list.end()),
                   out.d_list.end());
  issues.check(!out.d_list.empty(), "the d-schedule is empty");
  for (std::int64_t d : out.d_list) {
    if (!(d >= 1 && is_odd(d))) {
      issues.add("d=" + std::to_string(d) + " must be a positive odd integer");
      continue;
    }
    if (d < out.n) {
      issues.add("d=" + std::to_string(d) +
                 " is below n; the interpolant does not exist there");
    }
    if (d <= out.n0) {
      issues.add("d=" + std::to_string(d) + " must exceed n0");
    }
  }
  if (out.n >= 1 && is_odd(out.n)) {
    issues.check(out.target.band_limit() <= out.n,
                 "target band must fit inside the sample window");
  }

  if (config.contains("mc")) {
    out.with_mc = true;
    issues.attempt(
        [&] {
          const Json& mc = config.at("mc");
          require(mc.is_object(), "mc must be a JSON object");
          out.mc.trials = detail::int_field(mc, "trials");
          if (mc.contains("eval_points")) {
            out.mc.eval_points = detail::int_field(mc, "eval_points");
          }
          if (mc.contains("noise_kind")) {
            out.mc.noise_kind =
                noise_kind_from_string(detail::string_field(mc, "noise_kind"));
          }
          validate(out.mc);
        },
        "mc");
  }
  issues.finish();
  return out;
}

inline ExperimentOutcome run_error_sweep(const Json& config,
                                         const RunContext& ctx) {
  const ErrorSweepConfig cfg = parse_error_sweep(config);
  detail::ensure_out_dir(ctx.out_dir);

  struct Row {
    std::int64_t d = 0;
    ErrorReport report;
  };
  std::vector<Row> rows(cfg.d_list.size());
  detail::parallel_for(
      static_cast<std::int64_t>(cfg.d_list.size()), ctx.jobs,
      [&](std::int64_t i) {
        const std::int64_t d = cfg.d_list[static_cast<std::size_t>(i)];
        const WeightProfile weights = hat_weights(cfg.n0, d, cfg.c);
        Row row;
        row.d = d;
        row.report =
            closed_form_error(weights, cfg.target, cfg.n, cfg.sigma_sq);
        if (cfg.with_mc) {
          McConfig mc = cfg.mc;
          mc.seed = stream_seed(ctx.seed, static_cast<std::uint64_t>(i));
          const McResult estimate = monte_carlo_error(
              [&weights](const SampleSet& samples) {
                return min_norm_fit(samples, weights);
              },
              cfg.target, cfg.n, std::sqrt(cfg.sigma_sq), mc);
          row.report.mc_estimate = estimate.estimate;
          row.report.mc_stderr = estimate.standard_error;
        }
        rows[static_cast<std::size_t>(i)] = row;
      });

  detail::CsvTable table("d,n,var,bias_sq,total,mc_estimate,mc_stderr");
  for (const Row& row : rows) {
    table.row({detail::cell(row.d), detail::cell(cfg.n),
               detail::cell(row.report.var), detail::cell(row.report.bias_sq),
               detail::cell(row.report.total),
               detail::cell(row.report.mc_estimate.value_or(
                   std::numeric_limits<double>::quiet_NaN())),
               detail::cell(row.report.mc_stderr.value_or(
                   std::numeric_limits<double>::quiet_NaN()))});
  }

  const std::string csv_path =
      detail::join_path(ctx.out_dir, "error_sweep.csv");
  const std::string sidecar_path =
      detail::join_path(ctx.out_dir, "error_sweep.json");
  write_text_file(csv_path, table.text);
  Json sidecar = detail::base_sidecar("error-sweep", config, ctx);
  sidecar["files"] = Json::array({"error_sweep.csv"});
  write_text_file(sidecar_path, sidecar.dump(2) + "\n");
  return ExperimentOutcome{{csv_path, sidecar_path}};
}

// ---------------------------------------------------------------------------
// benign-scaling (subcommand `scaling`): closed-form error along d = n^alpha.
// ---------------------------------------------------------------------------

struct BenignScalingConfig {
  std::vector<double> alphas;
  std::vector<std::int64_t> n_list;
  std::int64_t n0 = 0;
  double c = 0.5;
  double sigma_sq = 0.0;
  TargetSpec target;
};

inline BenignScalingConfig parse_benign_scaling(const Json& config) {
  detail::IssueList issues;
  BenignScalingConfig out;
  issues.check(config.is_object(), "config must be a JSON object");
  issues.finish();

  issues.attempt(
      [&] { out.alphas = detail::number_array_field(config, "alphas"); },
      "alphas");
  issues.attempt(
      [&] {
        for (const Json& v : config.at("n_list")) {
          require(v.is_number_integer(), "n_list must contain integers");
          out.n_list.push_back(v.get<std::int64_t>());
        }
      },
      "n_list");
  issues.attempt([&] { out.n0 = detail::int_field(config, "n0"); }, "n0");
  issues.attempt([&] { out.c = detail::number_field(config, "c"); }, "c");
  issues.attempt(
      [&] { out.sigma_sq = detail::number_field(config, "sigma_sq"); },
      "sigma_sq");
  issues.check(config.contains("target"), "missing 'target' spec");
  if (config.contains("target")) {
    issues.attempt([&] { out.target = target_from_json(config.at("target")); },
                   "target");
  }

  issues.check(!out.alphas.empty(), "alphas must be nonempty");
  for (double alpha : out.alphas) {
    issues.check(std::isfinite(alpha) && alpha > 0.0,
                 "alpha values must be positive");
  }
  std::sort(out.n_list.begin(), out.n_list.end());
  out.n_list.erase(std::unique(out.n_list.begin(), out.n_list.end()),
                   out.n_list.end());
  issues.check(!out.n_list.empty(), "n_list must be nonempty");
  issues.check(out.n0 >= 1 && is_odd(out.n0),
               "n0 must be a positive odd integer");
  issues.check(out.c > 0.0 && out.c < 1.0, "c must lie strictly inside (0,1)");
  issues.check(out.sigma_sq >= 0.0, "sigma_sq must be nonnegative");
  for (std::int64_t n : out.n_list) {
    if (!(n >= 1 && is_odd(n))) {
      issues.add("n=" + std::to_string(n) + " must be a positive odd integer");
      continue;
    }
    issues.check(out.target.band_limit() <= n,
                 "target band must fit inside the n=" + std::to_string(n) +
                     " sample window");
    for (double alpha : out.alphas) {
      if (!(std::isfinite(alpha) && alpha > 0.0)) continue;
      const std::int64_t d = scaled_dimension(n, alpha);
      issues.check(out.n0 < d, "n0 must be below d=" + std::to_string(d) +
                                   " at n=" + std::to_string(n) + ", alpha=" +
                                   format_double(alpha));
    }
  }
  issues.finish();
  return out;
}

inline ExperimentOutcome run_benign_scaling(const Json& config,
                                            const RunContext& ctx) {
  const BenignScalingConfig cfg = parse_benign_scaling(config);
  detail::ensure_out_dir(ctx.out_dir);

  std::vector<std::vector<ScalingPoint>> curves(cfg.alphas.size());
  detail::parallel_for(static_cast<std::int64_t>(cfg.alphas.size()), ctx.jobs,
                       [&](std::int64_t i) {
                         curves[static_cast<std::size_t>(i)] =
                             benign_scaling_curve(
                                 cfg.n_list,
                                 cfg.alphas[static_cast<std::size_t>(i)],
                                 cfg.n0, cfg.c, cfg.target, cfg.sigma_sq);
                       });

  detail::CsvTable table("n,d,alpha,var,bias_sq,total");
  for (std::size_t i = 0; i < cfg.alphas.size(); ++i) {
    for (const ScalingPoint& point : curves[i]) {
      table.row({detail::cell(point.n), detail::cell(point.d),
                 detail::cell(cfg.alphas[i]), detail::cell(point.error.var),
                 detail::cell(point.error.bias_sq),
                 detail::cell(point.error.total)});
    }
  }

  const std::string csv_path =
      detail::join_path(ctx.out_dir, "benign_scaling.csv");
  const std::string sidecar_path =
      detail::join_path(ctx.out_dir, "benign_scaling.json");
  write_text_file(csv_path, table.text);
  Json sidecar = detail::base_sidecar("benign-scaling", config, ctx);
  sidecar["files"] = Json::array({"benign_scaling.csv"});
  write_text_file(sidecar_path, sidecar.dump(2) + "\n");
  return ExperimentOutcome{{csv_path, sidecar_path}};
}

// ---------------------------------------------------------------------------
// encoding-report (subcommand `encoding`): per-k degeneracies and weights.
// ---------------------------------------------------------------------------

struct EncodingReportConfig {
  std::vector<EncodingStrategy> strategies;
  std::optional<Json> state_spec;
};

inline EncodingReportConfig parse_encoding_report(const Json& config) {
  detail::IssueList issues;
  EncodingReportConfig out;
  issues.check(config.is_object(), "config must be a JSON object");
  issues.finish();

  issues.check(config.contains("encodings") &&
                   config.at("encodings").is_array() &&
                   !config.at("encodings").empty(),
               "provide a nonempty 'encodings' array");
  if (issues.clean()) {
    std::size_t index = 0;
    for (const Json& spec : config.at("encodings")) {
      issues.attempt(
          [&] { out.strategies.push_back(encoding_from_json(spec)); },
          "encodings[" + std::to_string(index) + "]");
      ++index;
    }
  }
  if (config.contains("state")) out.state_spec = config.at("state");
  issues.finish();

  // Second pass: the state must fit every strategy it will be applied to.
  if (out.state_spec.has_value()) {
    detail::IssueList state_issues;
    InputState probe = InputState::uniform(1);
    const bool parsed = state_issues.attempt(
        [&] { probe = state_from_json(*out.state_spec); }, "state");
    if (parsed) {
      for (const EncodingStrategy& s : out.strategies) {
        state_issues.check(probe.dimension() == s.dimension(),
                           "state dimension " +
                               std::to_string(probe.dimension()) +
                               " does not match encoding '" + s.name + "' (d=" +
                               std::to_string(s.dimension()) + ")");
      }
    }
    state_issues.finish();
  }
  return out;
}

inline ExperimentOutcome run_encoding_report(const Json& config,
                                             const RunContext& ctx) {
  const EncodingReportConfig cfg = parse_encoding_report(config);
  detail::ensure_out_dir(ctx.out_dir);

  std::vector<std::string> files;
  Json sidecar = detail::base_sidecar("encoding-report", config, ctx);
  Json described = Json::array();

  for (std::size_t i = 0; i < cfg.strategies.size(); ++i) {
    const EncodingStrategy& strategy = cfg.strategies[i];
    const auto analysis = spectrum_and_degeneracy(strategy);
    const InputState state =
        cfg.state_spec.has_value()
            ? state_from_json(*cfg.state_spec)
            : InputState::uniform(strategy.dimension());
    const WeightProfile weights =
        fourier_weights_from_state(analysis.degeneracies, state);

    detail::CsvTable table("k,degeneracy,nu");
    for (const auto& [k, pairs] : analysis.degeneracies.all()) {
      table.row({detail::cell(k),
                 detail::cell(static_cast<std::int64_t>(pairs.size())),
                 detail::cell(weights.at(k))});
    }
    const std::string file_name = "encoding_report_" + std::to_string(i) +
                                  "_" + detail::sanitize_name(strategy.name) +
                                  ".csv";
    const std::string path = detail::join_path(ctx.out_dir, file_name);
    write_text_file(path, table.text);
    files.push_back(path);

    Json entry = encoding_to_json(strategy);
    entry["file"] = file_name;
    entry["spectrum_size"] = analysis.spectrum.size();
    described.push_back(entry);
  }

  sidecar["encodings"] = described;
  const std::string sidecar_path =
      detail::join_path(ctx.out_dir, "encoding_report.json");
  write_text_file(sidecar_path, sidecar.dump(2) + "\n");
  files.push_back(sidecar_path);
  return ExperimentOutcome{files};
}

// ---------------------------------------------------------------------------
// quantum-fit (subcommand `quantum`): optimal-observable fits for a list of
// states, dense model curves, and an optional closed-form (n, L) scaling
// table over a contiguous-encoding schedule.
// ---------------------------------------------------------------------------

struct QuantumStateSpec {
  std::string name;
  Json spec;
};

struct QuantumFitConfig {
  std::optional<EncodingStrategy> encoding;  // fixed-n curve section
  std::int64_t n = 0;
  TargetSpec target;
  double sigma = 0.0;
  NoiseKind noise_kind = NoiseKind::gaussian;
  std::int64_t curve_points = 1000;
  std::vector<QuantumStateSpec> states;
  std::vector<std::int64_t> n_schedule;  // optional scaling section
  std::int64_t d_over_n = 0;
};

namespace detail {

/// Builds a state of dimension d from a spec: a raw amplitude array or one of
/// the named kinds {uniform, basis, benign, haar}.
inline InputState materialize_state(const Json& spec, std::int64_t d) {
  if (spec.is_array()) {
    InputState state = state_from_json(spec);
    require(state.dimension() == d,
            "state array has dimension " + std::to_string(state.dimension()) +
                " but the encoding needs " + std::to_string(d));
    return state;
  }
  require(spec.is_object(), "state spec must be an array or an object");
  const std::string kind = string_field(spec, "kind");
  if (kind == "uniform") return InputState::uniform(d);
  if (kind == "basis") return InputState::basis(d, int_field(spec, "index"));
  if (kind == "benign") {
    return benign_state(int_field(spec, "n0"), d, number_field(spec, "a"));
  }
  if (kind == "haar") {
    std::mt19937_64 engine = make_stream(
        static_cast<std::uint64_t>(int_field(spec, "seed")), 0);
    return haar_state_sample(d, engine);
  }
  throw InvalidArgument("unknown state kind '" + kind + "'");
}

}  // namespace detail

inline QuantumFitConfig parse_quantum_fit(const Json& config) {
  detail::IssueList issues;
  QuantumFitConfig out;
  issues.check(config.is_object(), "config must be a JSON object");
  issues.finish();

  if (config.contains("encoding")) {
    issues.attempt(
        [&] { out.encoding = encoding_from_json(config.at("encoding")); },
        "encoding");
  }
  issues.attempt([&] { out.n = detail::int_field(config, "n"); }, "n");
  issues.check(out.n >= 1 && is_odd(out.n), "n must be a positive odd integer");
  issues.check(config.contains("target"), "missing 'target' spec");
  if (config.contains("target")) {
    issues.attempt([&] { out.target = target_from_json(config.at("target")); },
                   "target");
  }
  issues.check(out.target.real_valued(1e-12),
               "quantum fits need a real-valued target (Hermitian "
               "observables produce real models)");
  if (config.contains("sigma")) {
    issues.attempt([&] { out.sigma = detail::number_field(config, "sigma"); },
                   "sigma");
  }
  issues.check(out.sigma >= 0.0, "sigma must be nonnegative");
  if (config.contains("noise_kind")) {
    issues.attempt(
        [&] {
          out.noise_kind = noise_kind_from_string(
              detail::string_field(config, "noise_kind"));
        },
        "noise_kind");
  }
  if (config.contains("curve_points")) {
    issues.attempt(
        [&] { out.curve_points = detail::int_field(config, "curve_points"); },
        "curve_points");
  }
  issues.check(out.curve_points >= 2, "curve_points must be at least 2");

  issues.check(config.contains("states") && config.at("states").is_array() &&
                   !config.at("states").empty(),
               "provide a nonempty 'states' array");
  if (issues.clean()) {
    std::size_t index = 0;
    for (const Json& entry : config.at("states")) {
      QuantumStateSpec spec;
      if (entry.is_object() && entry.contains("name") &&
          entry.contains("state")) {
        issues.attempt(
            [&] { spec.name = detail::string_field(entry, "name"); },
            "states[" + std::to_string(index) + "].name");
        spec.spec = entry.at("state");
      } else {
        spec.name = "state" + std::to_string(index);
        spec.spec = entry;
      }
      out.states.push_back(std::move(spec));
      ++index;
    }
    for (std::size_t a = 0; a < out.states.size(); ++a) {
      for (std::size_t b = a + 1; b < out.states.size(); ++b) {
        issues.check(detail::sanitize_name(out.states[a].name) !=
                         detail::sanitize_name(out.states[b].name),
                     "state names must be distinct after sanitization: '" +
                         out.states[a].name + "' vs '" + out.states[b].name +
                         "'");
      }
    }
  }

  if (config.contains("n_schedule") || config.contains("d_over_n")) {
    issues.check(config.contains("n_schedule") && config.contains("d_over_n"),
                 "scaling section needs both 'n_schedule' and 'd_over_n'");
  }
  if (config.contains("n_schedule") && config.contains("d_over_n")) {
    issues.attempt(
        [&] {
          for (const Json& v : config.at("n_schedule")) {
            require(v.is_number_integer(),
                    "n_schedule must contain integers");
            out.n_schedule.push_back(v.get<std::int64_t>());
          }
        },
        "n_schedule");
    issues.attempt(
        [&] { out.d_over_n = detail::int_field(config, "d_over_n"); },
        "d_over_n");
    std::sort(out.n_schedule.begin(), out.n_schedule.end());
    out.n_schedule.erase(
        std::unique(out.n_schedule.begin(), out.n_schedule.end()),
        out.n_schedule.end());
    issues.check(!out.n_schedule.empty(), "n_schedule must be nonempty");
    issues.check(out.d_over_n >= 1, "d_over_n must be at least 1");
    for (std::int64_t n : out.n_schedule) {
      if (!(n >= 1 && is_odd(n))) {
        issues.add("n_schedule entry " + std::to_string(n) +
                   " must be a positive odd integer");
        continue;
      }
      issues.check(out.target.band_limit() <= n,
                   "target band must fit inside the n=" + std::to_string(n) +
                       " sample window");
    }
    for (const QuantumStateSpec& spec : out.states) {
      issues.check(spec.spec.is_object(),
                   "state '" + spec.name +
                       "' must be a named kind (not a raw array) when a "
                       "scaling schedule is present");
    }
  }

  // The curve section needs a concrete encoding.
  issues.check(out.encoding.has_value(), "missing 'encoding' spec");
  issues.check(out.target.band_limit() <= out.n,
               "target band must fit inside the sample window");

  issues.finish();

  // Materialization pass: every state must build against the fixed encoding.
  {
    detail::IssueList build_issues;
    if (out.encoding.has_value()) {
      for (const QuantumStateSpec& spec : out.states) {
        build_issues.attempt(
            [&] {
              (void)detail::materialize_state(spec.spec,
                                              out.encoding->dimension());
            },
            "state '" + spec.name + "'");
      }
    }
    for (std::int64_t n : out.n_schedule) {
      const std::int64_t d = out.d_over_n * n;
      for (const QuantumStateSpec& spec : out.states) {
        build_issues.attempt(
            [&] { (void)detail::materialize_state(spec.spec, d); },
            "state '" + spec.name + "' at scheduled n=" + std::to_string(n));
      }
    }
    build_issues.finish();
  }
  return out;
}

inline ExperimentOutcome run_quantum_fit(const Json& config,
                                         const RunContext& ctx) {
  const QuantumFitConfig cfg = parse_quantum_fit(config);
  detail::ensure_out_dir(ctx.out_dir);
  const EncodingStrategy& encoding = *cfg.encoding;

  std::mt19937_64 engine = make_stream(ctx.seed, 0);
  const SampleSet samples =
      sample_target(cfg.target, cfg.n, cfg.sigma, engine, cfg.noise_kind);

  std::vector<std::string> files;
  Json state_reports = Json::array();

  detail::CsvTable sample_rows("x,y_re,y_im");
  for (std::int64_t j = 0; j < cfg.n; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(cfg.n);
    const Complex y = samples.values[static_cast<std::size_t>(j)];
    sample_rows.row(
        {detail::cell(x), detail::cell(y.real()), detail::cell(y.imag())});
  }
  const std::string samples_path =
      detail::join_path(ctx.out_dir, "quantum_samples.csv");
  write_text_file(samples_path, sample_rows.text);
  files.push_back(samples_path);

  for (const QuantumStateSpec& spec : cfg.states) {
    const InputState state =
        detail::materialize_state(spec.spec, encoding.dimension());
    const QuantumModel model =
        optimal_quantum_model(samples, encoding, state);

    double max_interpolation_error = 0.0;
    for (std::int64_t j = 0; j < cfg.n; ++j) {
      const double x = static_cast<double>(j) / static_cast<double>(cfg.n);
      const double f = model.evaluate_real(x);
      const double y = samples.values[static_cast<std::size_t>(j)].real();
      max_interpolation_error =
          std::max(max_interpolation_error, std::abs(f - y));
    }

    detail::CsvTable curve("x,f,g");
    double max_imag = 0.0;
    for (std::int64_t i = 0; i < cfg.curve_points; ++i) {
      const double x =
          static_cast<double>(i) / static_cast<double>(cfg.curve_points);
      double imag = 0.0;
      const double f = model.evaluate_real(x, &imag);
      max_imag = std::max(max_imag, imag);
      const double g = cfg.target.series.evaluate(x).real();
      curve.row({detail::cell(x), detail::cell(f), detail::cell(g)});
    }
    const std::string file_name =
        "quantum_curve_" + detail::sanitize_name(spec.name) + ".csv";
    const std::string path = detail::join_path(ctx.out_dir, file_name);
    write_text_file(path, curve.text);
    files.push_back(path);

    Json report;
    report["name"] = spec.name;
    report["file"] = file_name;
    report["max_interpolation_error"] = max_interpolation_error;
    report["max_imag_f"] = max_imag;
    report["observable_frobenius_norm"] = model.observable.frobenius_norm();
    state_reports.push_back(report);
  }

  if (!cfg.n_schedule.empty()) {
    struct Row {
      std::string state;
      std::int64_t n = 0;
      std::int64_t d = 0;
      ErrorReport report;
    };
    const std::int64_t states_count =
        static_cast<std::int64_t>(cfg.states.size());
    const std::int64_t points =
        states_count * static_cast<std::int64_t>(cfg.n_schedule.size());
    std::vector<Row> rows(static_cast<std::size_t>(points));
    detail::parallel_for(points, ctx.jobs, [&](std::int64_t i) {
      const std::size_t state_index =
          static_cast<std::size_t>(i / static_cast<std::int64_t>(
                                           cfg.n_schedule.size()));
      const std::size_t n_index =
          static_cast<std::size_t>(i % static_cast<std::int64_t>(
                                           cfg.n_schedule.size()));
      const std::int64_t n = cfg.n_schedule[n_index];
      const std::int64_t d = cfg.d_over_n * n;
      const EncodingStrategy ladder = contiguous_strategy(d);
      const InputState state =
          detail::materialize_state(cfg.states[state_index].spec, d);
      const WeightProfile weights = fourier_weights_from_state(ladder, state);
      Row row;
      row.state = cfg.states[state_index].name;
      row.n = n;
      row.d = d;
      row.report = closed_form_error(weights, cfg.target, n,
                                     cfg.sigma * cfg.sigma);
      rows[static_cast<std::size_t>(i)] = row;
    });

    detail::CsvTable table("state,n,d,var,bias_sq,total");
    for (const Row& row : rows) {
      table.row({detail::sanitize_name(row.state), detail::cell(row.n),
                 detail::cell(row.d), detail::cell(row.report.var),
                 detail::cell(row.report.bias_sq),
                 detail::cell(row.report.total)});
    }
    const std::string scaling_path =
        detail::join_path(ctx.out_dir, "quantum_scaling.csv");
    write_text_file(scaling_path, table.text);
    files.push_back(scaling_path);
  }

  Json sidecar = detail::base_sidecar("quantum-fit", config, ctx);
  sidecar["states"] = state_reports;
  sidecar["encoding"] = encoding_to_json(encoding);
  const std::string sidecar_path =
      detail::join_path(ctx.out_dir, "quantum_fit.json");
  write_text_file(sidecar_path, sidecar.dump(2) + "\n");
  files.push_back(sidecar_path);
  return ExperimentOutcome{files};
}

// ---------------------------------------------------------------------------
// haar-stats (subcommand `haar`): empirical vs analytic moments of ν_k.
// ---------------------------------------------------------------------------

struct HaarStatsConfig {
  EncodingStrategy encoding = contiguous_strategy(1);
  std::int64_t samples = 0;
};

inline HaarStatsConfig parse_haar_stats(const Json& config) {
  detail::IssueList issues;
  HaarStatsConfig out;
  issues.check(config.is_object(), "config must be a JSON object");
  issues.finish();

  issues.check(config.contains("encoding"), "missing 'encoding' spec");
  if (config.contains("encoding")) {
    issues.attempt(
        [&] { out.encoding = encoding_from_json(config.at("encoding")); },
        "encoding");
  }
  issues.attempt([&] { out.samples = detail::int_field(config, "samples"); },
                 "samples");
  issues.check(out.samples >= 1000, "samples must be at least 1000");
  issues.finish();
  return out;
}

inline ExperimentOutcome run_haar_stats(const Json& config,
                                        const RunContext& ctx) {
  const HaarStatsConfig cfg = parse_haar_stats(config);
  detail::ensure_out_dir(ctx.out_dir);

  const auto analysis = spectrum_and_degeneracy(cfg.encoding);
  const std::vector<HaarWeightSummary> stats =
      haar_weight_stats(cfg.encoding, cfg.samples, ctx.seed);

  const bool has_variance_form =
      cfg.encoding.name == "binary" || cfg.encoding.name == "golomb";
  detail::CsvTable table(
      "k,degeneracy,mean_emp,mean_analytic,mean_se,var_emp,var_analytic,"
      "var_se");
  for (const HaarWeightSummary& row : stats) {
    double var_analytic = std::numeric_limits<double>::quiet_NaN();
    if (has_variance_form && row.frequency != 0) {
      var_analytic = haar_weight_variance(cfg.encoding.name, row.frequency,
                                          cfg.encoding.dimension());
    }
    table.row({detail::cell(row.frequency), detail::cell(row.degeneracy),
               detail::cell(row.mean),
               detail::cell(haar_mean_weight(analysis.degeneracies,
                                             row.frequency)),
               detail::cell(row.mean_std_error), detail::cell(row.variance),
               detail::cell(var_analytic),
               detail::cell(row.variance_std_error)});
  }

  const std::string csv_path =
      detail::join_path(ctx.out_dir, "haar_stats.csv");
  const std::string sidecar_path =
      detail::join_path(ctx.out_dir, "haar_stats.json");
  write_text_file(csv_path, table.text);
  Json sidecar = detail::base_sidecar("haar-stats", config, ctx);
  sidecar["files"] = Json::array({"haar_stats.csv"});
  sidecar["encoding"] = encoding_to_json(cfg.encoding);
  write_text_file(sidecar_path, sidecar.dump(2) + "\n");
  return ExperimentOutcome{{csv_path, sidecar_path}};
}

// ---------------------------------------------------------------------------
// Dispatch by subcommand name.
// ---------------------------------------------------------------------------

inline ExperimentOutcome run_experiment(const std::string& kind,
                                        const Json& config,
                                        const RunContext& ctx) {
  if (kind == "fit") return run_classical_fit(config, ctx);
  if (kind == "sweep") return run_error_sweep(config, ctx);
  if (kind == "scaling") return run_benign_scaling(config, ctx);
  if (kind == "encoding") return run_encoding_report(config, ctx);
  if (kind == "quantum") return run_quantum_fit(config, ctx);
  if (kind == "haar") return run_haar_stats(config, ctx);
  throw InvalidArgument("unknown experiment kind '" + kind + "'");
}

}  // namespace fourierfit
