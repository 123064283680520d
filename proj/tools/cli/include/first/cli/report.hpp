#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "first/estimators.hpp"
#include "first/selection.hpp"

namespace first {

void to_json(nlohmann::json& j, const SelectionStep& step);
void from_json(const nlohmann::json& j, SelectionStep& step);
void to_json(nlohmann::json& j, const SelectionTrace& trace);
void from_json(const nlohmann::json& j, SelectionTrace& trace);

}  // namespace first

namespace first::cli {

/// Settings echoed back in every CSV-driven report.
struct RunSettings {
  std::size_t rows = 0;
  std::size_t dropped_rows = 0;
  std::size_t n_inner = 2;
  std::optional<std::size_t> n_outer;
  std::uint64_t seed = 0;
  bool standardized = true;

  friend bool operator==(const RunSettings&, const RunSettings&) = default;
};

struct EstimateReport {
  std::vector<std::string> factors;
  std::vector<double> s_tot;
  double noise_var = 0.0;
  double signal_var = 0.0;
  double total_var = 0.0;
  RunSettings settings;
  std::vector<std::string> notes;

  friend bool operator==(const EstimateReport&, const EstimateReport&) = default;
};

struct SelectReport {
  std::string method;  // "first" or "first-fast"
  std::vector<std::string> factors;
  std::vector<std::string> selected;  // names of trace.final_active
  SelectionTrace trace;
  RunSettings settings;
  std::vector<std::string> notes;

  friend bool operator==(const SelectReport&, const SelectReport&) = default;
};

struct Replication {
  std::uint64_t seed = 0;
  std::vector<double> importance;     // length p
  std::vector<std::size_t> selected;  // 0-based, ascending
  double runtime_s = 0.0;
  std::optional<double> tau;          // absent without a ground truth
  bool exact = false;
  double tpr = 0.0;
  double fpr = 0.0;

  friend bool operator==(const Replication&, const Replication&) = default;
};

struct BenchmarkReport {
  std::string function;
  std::size_t p = 0;
  double rho = 0.0;
  std::size_t n = 0;
  std::size_t replications = 0;
  std::string method;
  std::string response;  // "regression" or "binary"
  std::size_t n_inner = 2;
  std::uint64_t seed = 0;
  std::vector<std::size_t> true_set;   // 0-based
  std::vector<double> groundtruth;     // length p, empty for binary responses
  std::vector<Replication> runs;
  std::optional<double> mean_tau;
  double exact_rate = 0.0;
  double mean_tpr = 0.0;
  double mean_fpr = 0.0;
  bool fpr_undefined = false;
  double mean_runtime_s = 0.0;

  friend bool operator==(const BenchmarkReport&, const BenchmarkReport&) = default;
};

void to_json(nlohmann::json& j, const RunSettings& s);
void from_json(const nlohmann::json& j, RunSettings& s);
void to_json(nlohmann::json& j, const EstimateReport& r);
void from_json(const nlohmann::json& j, EstimateReport& r);
void to_json(nlohmann::json& j, const SelectReport& r);
void from_json(const nlohmann::json& j, SelectReport& r);
void to_json(nlohmann::json& j, const Replication& r);
void from_json(const nlohmann::json& j, Replication& r);
void to_json(nlohmann::json& j, const BenchmarkReport& r);
void from_json(const nlohmann::json& j, BenchmarkReport& r);

/// Aligned plain-text renderings for terminals.
std::string format_table(const EstimateReport& r);
std::string format_table(const SelectReport& r);
std::string format_table(const BenchmarkReport& r);

}  // namespace first::cli
