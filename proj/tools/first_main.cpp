#include <charconv>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "first/cli/commands.hpp"

namespace {

using namespace first::cli;

struct CsvFlags {
  std::string data;
  std::string response;
  std::optional<std::size_t> n_inner;
  std::string n_outer = "all";
  std::uint64_t seed = 0;
  std::vector<std::string> categoricals;
  bool no_standardize = false;
  bool drop_missing = false;
  std::size_t workers = 0;
  bool fast = false;
};

void add_csv_flags(CLI::App* cmd, CsvFlags& f) {
  cmd->add_option("--data", f.data, "CSV file with a header row")->required();
  cmd->add_option("--response", f.response, "response column name")->required();
  cmd->add_option("--ni", f.n_inner, "inner-loop neighbour count (default 2, or 3 for 0/1 y)");
  cmd->add_option("--no", f.n_outer, "outer-loop size: a row count or 'all'");
  cmd->add_option("--seed", f.seed, "random seed for outer subsampling");
  cmd->add_option("--categorical", f.categoricals, "categorical columns")->delimiter(',');
  cmd->add_flag("--no-standardize", f.no_standardize, "use raw continuous columns");
  cmd->add_flag("--drop-missing", f.drop_missing, "drop rows with missing cells");
  cmd->add_option("--workers", f.workers, "worker threads (0 = all)");
}

std::optional<std::size_t> parse_outer(const std::string& text) {
  if (text == "all") return std::nullopt;
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw CLI::ValidationError("--no", "expected a row count or 'all', got " + text);
  }
  return v;
}

SelectOptions to_options(const CsvFlags& f) {
  SelectOptions o;
  o.data = f.data;
  o.response = f.response;
  o.n_inner = f.n_inner;
  o.n_outer = parse_outer(f.n_outer);
  o.seed = f.seed;
  o.categoricals = f.categoricals;
  o.standardize = !f.no_standardize;
  o.on_missing = f.drop_missing ? first::MissingPolicy::drop_rows : first::MissingPolicy::reject;
  o.workers = f.workers;
  o.fast = f.fast;
  return o;
}

int emit(const CommandResult& r, const std::string& format) {
  for (const auto& d : r.diagnostics) std::cerr << d << '\n';
  if (!r.output.is_null()) {
    if (format == "table") {
      std::cout << r.table;
    } else {
      std::cout << r.output.dump(2) << '\n';
    }
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factor importance and selection from noisy tabular data"};
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();

  CsvFlags est_flags;
  auto* estimate = app.add_subcommand("estimate", "noise-adjusted total Sobol' indices");
  add_csv_flags(estimate, est_flags);

  CsvFlags sel_flags;
  auto* select = app.add_subcommand("select", "forward selection plus backward elimination");
  add_csv_flags(select, sel_flags);
  select->add_flag("--fast", sel_flags.fast, "prune candidates that lower explainable variance");

  BenchmarkOptions bench;
  std::string function = "ishigami";
  std::string method = "first";
  std::string response = "regression";
  auto* benchmark = app.add_subcommand("benchmark", "synthetic benchmark replications");
  benchmark->add_option("--function", function)
      ->check(CLI::IsMember({"ishigami", "heavy_tailed", "heavy-tailed", "friedman"}))
      ->required();
  benchmark->add_option("--p", bench.p, "number of inputs")->required();
  benchmark->add_option("--rho", bench.rho, "autoregressive copula correlation")
      ->capture_default_str();
  benchmark->add_option("--n", bench.n, "samples per replication")->capture_default_str();
  benchmark->add_option("--reps", bench.reps, "replications")->capture_default_str();
  benchmark->add_option("--method", method)
      ->check(CLI::IsMember({"first", "first-fast", "first_fast"}))
      ->capture_default_str();
  benchmark->add_option("--seed", bench.seed)->capture_default_str();
  benchmark->add_option("--response", response)
      ->check(CLI::IsMember({"regression", "binary"}))
      ->capture_default_str();
  benchmark->add_option("--ni", bench.n_inner, "inner-loop neighbour count");
  benchmark->add_option("--noise-sd", bench.noise_sd, "regression noise sd")
      ->capture_default_str();
  benchmark->add_flag("--standardize", bench.standardize, "z-score inputs before selection");
  benchmark->add_option("--groundtruth-no", bench.groundtruth_outer,
                        "outer draws for the double-loop ground truth")
      ->capture_default_str();
  benchmark->add_option("--workers", bench.workers, "worker threads (0 = all)");

  try {
    app.parse(argc, argv);
    if (estimate->parsed()) return emit(cmd_estimate(to_options(est_flags)), format);
    if (select->parsed()) return emit(cmd_select(to_options(sel_flags)), format);
    bench.function = *first::parse_benchmark(function);
    bench.method = *parse_method(method);
    bench.response = response == "binary" ? ResponseKind::binary : ResponseKind::regression;
    return emit(cmd_benchmark(bench), format);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_input_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input_error;
  }
}
