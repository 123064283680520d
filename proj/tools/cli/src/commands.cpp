#include "first/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <sstream>

#include "first/cli/metrics.hpp"
#include "first/error.hpp"
#include "first/estimators.hpp"
#include "first/parallel.hpp"
#include "first/selection.hpp"

namespace first::cli {

namespace {

constexpr std::uint64_t kGroundtruthStream = 0x67740000;

struct Prepared {
  LoadedCsv loaded;
  EncodedMatrix matrix;
  EstimatorConfig cfg;
  RunSettings settings;
  std::vector<std::string> notes;
};

Prepared prepare(const CsvRunOptions& o) {
  CsvOptions csv;
  csv.response = o.response;
  csv.categoricals = o.categoricals;
  csv.on_missing = o.on_missing;
  LoadedCsv loaded = load_csv(o.data, csv);
  EncodedMatrix matrix = encode(loaded.data, o.standardize);

  EstimatorConfig cfg;
  cfg.n_inner = o.n_inner.value_or(default_inner_count(loaded.data.binary_response()));
  cfg.n_outer = o.n_outer;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.validate(loaded.data.rows());

  RunSettings settings;
  settings.rows = loaded.data.rows();
  settings.dropped_rows = loaded.dropped_rows;
  settings.n_inner = cfg.n_inner;
  settings.n_outer = cfg.n_outer;
  settings.seed = cfg.seed;
  settings.standardized = o.standardize;

  std::vector<std::string> notes;
  if (loaded.dropped_rows > 0) {
    notes.push_back("dropped " + std::to_string(loaded.dropped_rows) +
                    " rows with missing values");
  }
  for (std::size_t f : matrix.constant_factors()) {
    notes.push_back("factor " + loaded.data.factor(f).name + " is constant");
  }
  return {std::move(loaded), std::move(matrix), cfg, settings, std::move(notes)};
}

template <class Run>
CommandResult guarded(Run&& run) {
  CommandResult result;
  try {
    run(result);
  } catch (const InputError& e) {
    result = {};
    result.exit_code = exit_input_error;
    result.diagnostics.emplace_back(e.what());
  }
  return result;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

std::string to_string(Method m) { return m == Method::first ? "first" : "first-fast"; }

std::optional<Method> parse_method(std::string_view name) {
  if (name == "first") return Method::first;
  if (name == "first-fast" || name == "first_fast") return Method::first_fast;
  return std::nullopt;
}

EstimateReport run_estimate(const CsvRunOptions& options) {
  Prepared prep = prepare(options);
  const ImportanceResult r = nanne(prep.matrix, prep.loaded.data.response(), prep.cfg);
  EstimateReport report;
  report.factors = prep.loaded.data.factor_names();
  report.s_tot = r.s_tot;
  report.noise_var = r.noise_var;
  report.signal_var = r.signal_var;
  report.total_var = r.total_var;
  report.settings = prep.settings;
  report.notes = std::move(prep.notes);
  report.notes.insert(report.notes.end(), r.warnings.begin(), r.warnings.end());
  return report;
}

SelectReport run_select(const SelectOptions& options) {
  Prepared prep = prepare(options);
  const auto y = prep.loaded.data.response();
  SelectReport report;
  report.method = to_string(options.fast ? Method::first_fast : Method::first);
  report.factors = prep.loaded.data.factor_names();
  report.trace = options.fast ? first_fast_select(prep.matrix, y, prep.cfg)
                              : first_select(prep.matrix, y, prep.cfg);
  for (std::size_t f : report.trace.final_active) report.selected.push_back(report.factors[f]);
  report.settings = prep.settings;
  report.notes = std::move(prep.notes);
  if (total_variance(y) == 0.0) report.notes.emplace_back("response is constant");
  return report;
}

BenchmarkReport run_benchmark(const BenchmarkOptions& o) {
  const BenchmarkFunction f = benchmark_function(o.function);
  if (o.p < f.min_dim) {
    throw InputError(to_string(o.function) + " needs p >= " + std::to_string(f.min_dim));
  }
  if (o.n < 2) throw InputError("n must be at least 2");
  if (o.reps < 1) throw InputError("reps must be at least 1");
  if (!(o.noise_sd >= 0.0)) throw InputError("noise sd must be non-negative");
  const CopulaSpec spec = CopulaSpec::autoregressive(o.p, o.rho, Marginal::uniform01);
  const bool binary = o.response == ResponseKind::binary;

  BenchmarkReport report;
  report.function = to_string(o.function);
  report.p = o.p;
  report.rho = o.rho;
  report.n = o.n;
  report.replications = o.reps;
  report.method = to_string(o.method);
  report.response = binary ? "binary" : "regression";
  report.n_inner = o.n_inner.value_or(default_inner_count(binary));
  report.seed = o.seed;
  report.true_set = f.active;
  if (!binary) {
    DoubleMcOptions mc;
    mc.n_outer = o.groundtruth_outer;
    mc.seed = mix_seed(o.seed, kGroundtruthStream);
    mc.workers = o.workers;
    report.groundtruth = groundtruth_importance(f, o.p, o.rho, mc);
  }
  EstimatorConfig probe;
  probe.n_inner = report.n_inner;
  probe.validate(o.n);

  const Model model = [&f](std::span<const double> x) { return f(x); };
  report.runs.resize(o.reps);
  parallel_for(o.reps, resolve_workers(o.workers), [&](std::size_t rep) {
    Replication& run = report.runs[rep];
    run.seed = mix_seed(o.seed, rep);
    const Dataset data = binary ? generate_binary(spec, model, o.n, run.seed)
                                : generate_regression(spec, model, o.noise_sd, o.n, run.seed);
    const EncodedMatrix m = encode(data, o.standardize);
    EstimatorConfig cfg;
    cfg.n_inner = report.n_inner;
    cfg.seed = run.seed;
    cfg.workers = 1;
    const auto start = std::chrono::steady_clock::now();
    const SelectionTrace trace = o.method == Method::first
                                     ? first_select(m, data.response(), cfg)
                                     : first_fast_select(m, data.response(), cfg);
    run.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    run.importance = trace.importance;
    run.selected = trace.final_active;
    if (!report.groundtruth.empty()) run.tau = kendall_tau(report.groundtruth, run.importance);
    const SelectionMetrics sm = selection_metrics(f.active, run.selected, o.p);
    run.exact = sm.exact;
    run.tpr = sm.tpr;
    run.fpr = sm.fpr;
  });

  std::vector<double> taus, exact, tpr, fpr, runtime;
  for (const Replication& run : report.runs) {
    if (run.tau) taus.push_back(*run.tau);
    exact.push_back(run.exact ? 1.0 : 0.0);
    tpr.push_back(run.tpr);
    fpr.push_back(run.fpr);
    runtime.push_back(run.runtime_s);
  }
  if (!taus.empty()) report.mean_tau = mean(taus);
  report.exact_rate = mean(exact);
  report.mean_tpr = mean(tpr);
  report.mean_fpr = mean(fpr);
  report.fpr_undefined = f.active.size() == o.p;
  report.mean_runtime_s = mean(runtime);
  return report;
}

CommandResult cmd_estimate(const CsvRunOptions& options) {
  return guarded([&](CommandResult& out) {
    const EstimateReport report = run_estimate(options);
    out.output = report;
    out.table = format_table(report);
    out.diagnostics = report.notes;
    out.exit_code = report.signal_var > 0.0 ? exit_ok : exit_degenerate;
  });
}

CommandResult cmd_select(const SelectOptions& options) {
  return guarded([&](CommandResult& out) {
    const SelectReport report = run_select(options);
    out.output = report;
    out.table = format_table(report);
    out.diagnostics = report.notes;
    const bool constant =
        std::ranges::find(report.notes, "response is constant") != report.notes.end();
    out.exit_code = constant ? exit_degenerate : exit_ok;
  });
}

CommandResult cmd_benchmark(const BenchmarkOptions& options) {
  return guarded([&](CommandResult& out) {
    const BenchmarkReport report = run_benchmark(options);
    out.output = report;
    out.table = format_table(report);
  });
}

}  // namespace first::cli
