#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "first/cli/report.hpp"
#include "first/dataset.hpp"
#include "first/synthetic.hpp"

namespace first::cli {

enum ExitCode : int { exit_ok = 0, exit_degenerate = 1, exit_input_error = 2 };

/// Outcome of a subcommand: the report (null on input errors), its exit code
/// and human-readable diagnostics destined for stderr.
struct CommandResult {
  int exit_code = exit_ok;
  nlohmann::json output;
  std::string table;
  std::vector<std::string> diagnostics;
};

struct CsvRunOptions {
  std::filesystem::path data;
  std::string response;
  std::optional<std::size_t> n_inner;  // default: 2, or 3 for a 0/1 response
  std::optional<std::size_t> n_outer;  // default: every row
  std::uint64_t seed = 0;
  std::vector<std::string> categoricals;
  bool standardize = true;
  MissingPolicy on_missing = MissingPolicy::reject;
  std::size_t workers = 0;
};

struct SelectOptions : CsvRunOptions {
  bool fast = false;
};

enum class Method { first, first_fast };
enum class ResponseKind { regression, binary };

std::string to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct BenchmarkOptions {
  BenchmarkId function = BenchmarkId::ishigami;
  std::size_t p = 6;
  double rho = 0.0;
  std::size_t n = 1000;
  std::size_t reps = 100;
  Method method = Method::first;
  std::uint64_t seed = 0;
  ResponseKind response = ResponseKind::regression;
  std::optional<std::size_t> n_inner;
  double noise_sd = 1.0;
  bool standardize = false;
  std::size_t groundtruth_outer = 100'000;
  std::size_t workers = 0;
};

EstimateReport run_estimate(const CsvRunOptions& options);
SelectReport run_select(const SelectOptions& options);
/// Throws InputError for invalid options.
BenchmarkReport run_benchmark(const BenchmarkOptions& options);

/// Wrappers that turn reports and input errors into exit codes: 1 when the
/// signal variance (estimate) or the response variance (select) is zero.
CommandResult cmd_estimate(const CsvRunOptions& options);
CommandResult cmd_select(const SelectOptions& options);
CommandResult cmd_benchmark(const BenchmarkOptions& options);

}  // namespace first::cli
