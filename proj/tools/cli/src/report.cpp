#include "first/cli/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace first {

namespace {

StepAction parse_action(const std::string& s) {
  if (s == "add") return StepAction::add;
  if (s == "eliminate") return StepAction::eliminate;
  if (s == "prune") return StepAction::prune;
  throw std::invalid_argument("unknown selection step: " + s);
}

}  // namespace

void to_json(nlohmann::json& j, const SelectionStep& step) {
  j = {{"action", to_string(step.action)}, {"factor", step.factor}, {"criterion", step.criterion}};
}

void from_json(const nlohmann::json& j, SelectionStep& step) {
  step.action = parse_action(j.at("action").get<std::string>());
  j.at("factor").get_to(step.factor);
  j.at("criterion").get_to(step.criterion);
}

void to_json(nlohmann::json& j, const SelectionTrace& trace) {
  j = {{"steps", trace.steps},
       {"final_active", trace.final_active},
       {"importance", trace.importance},
       {"forward_steps", trace.forward_steps},
       {"elimination_rounds", trace.elimination_rounds},
       {"candidate_sizes", trace.candidate_sizes},
       {"outer_sampling", trace.outer_sampling}};
}

void from_json(const nlohmann::json& j, SelectionTrace& trace) {
  j.at("steps").get_to(trace.steps);
  j.at("final_active").get_to(trace.final_active);
  j.at("importance").get_to(trace.importance);
  j.at("forward_steps").get_to(trace.forward_steps);
  j.at("elimination_rounds").get_to(trace.elimination_rounds);
  j.at("candidate_sizes").get_to(trace.candidate_sizes);
  j.at("outer_sampling").get_to(trace.outer_sampling);
}

}  // namespace first

namespace first::cli {

namespace {

template <class T>
void put_optional(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
void get_optional(const nlohmann::json& j, const char* key, std::optional<T>& v) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    v.reset();
  } else {
    v = it->get<T>();
  }
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

std::size_t widest(const std::vector<std::string>& names, std::size_t floor) {
  std::size_t w = floor;
  for (const auto& n : names) w = std::max(w, n.size());
  return w;
}

void append_notes(std::ostringstream& out, const std::vector<std::string>& notes) {
  for (const auto& n : notes) out << "note: " << n << '\n';
}

}  // namespace

void to_json(nlohmann::json& j, const RunSettings& s) {
  j = {{"rows", s.rows},
       {"dropped_rows", s.dropped_rows},
       {"n_inner", s.n_inner},
       {"seed", s.seed},
       {"standardized", s.standardized}};
  put_optional(j, "n_outer", s.n_outer);
}

void from_json(const nlohmann::json& j, RunSettings& s) {
  j.at("rows").get_to(s.rows);
  j.at("dropped_rows").get_to(s.dropped_rows);
  j.at("n_inner").get_to(s.n_inner);
  j.at("seed").get_to(s.seed);
  j.at("standardized").get_to(s.standardized);
  get_optional(j, "n_outer", s.n_outer);
}

void to_json(nlohmann::json& j, const EstimateReport& r) {
  j = {{"factors", r.factors},     {"s_tot", r.s_tot},         {"noise_var", r.noise_var},
       {"signal_var", r.signal_var}, {"total_var", r.total_var}, {"settings", r.settings},
       {"notes", r.notes}};
}

void from_json(const nlohmann::json& j, EstimateReport& r) {
  j.at("factors").get_to(r.factors);
  j.at("s_tot").get_to(r.s_tot);
  j.at("noise_var").get_to(r.noise_var);
  j.at("signal_var").get_to(r.signal_var);
  j.at("total_var").get_to(r.total_var);
  j.at("settings").get_to(r.settings);
  j.at("notes").get_to(r.notes);
}

void to_json(nlohmann::json& j, const SelectReport& r) {
  j = {{"method", r.method},     {"factors", r.factors},   {"selected", r.selected},
       {"trace", r.trace},       {"settings", r.settings}, {"notes", r.notes}};
}

void from_json(const nlohmann::json& j, SelectReport& r) {
  j.at("method").get_to(r.method);
  j.at("factors").get_to(r.factors);
  j.at("selected").get_to(r.selected);
  j.at("trace").get_to(r.trace);
  j.at("settings").get_to(r.settings);
  j.at("notes").get_to(r.notes);
}

void to_json(nlohmann::json& j, const Replication& r) {
  j = {{"seed", r.seed},     {"importance", r.importance}, {"selected", r.selected},
       {"runtime_s", r.runtime_s}, {"exact", r.exact},     {"tpr", r.tpr},
       {"fpr", r.fpr}};
  put_optional(j, "tau", r.tau);
}

void from_json(const nlohmann::json& j, Replication& r) {
  j.at("seed").get_to(r.seed);
  j.at("importance").get_to(r.importance);
  j.at("selected").get_to(r.selected);
  j.at("runtime_s").get_to(r.runtime_s);
  j.at("exact").get_to(r.exact);
  j.at("tpr").get_to(r.tpr);
  j.at("fpr").get_to(r.fpr);
  get_optional(j, "tau", r.tau);
}

void to_json(nlohmann::json& j, const BenchmarkReport& r) {
  j = {{"function", r.function},
       {"p", r.p},
       {"rho", r.rho},
       {"n", r.n},
       {"replications", r.replications},
       {"method", r.method},
       {"response", r.response},
       {"n_inner", r.n_inner},
       {"seed", r.seed},
       {"true_set", r.true_set},
       {"groundtruth", r.groundtruth},
       {"runs", r.runs},
       {"exact_rate", r.exact_rate},
       {"mean_tpr", r.mean_tpr},
       {"mean_fpr", r.mean_fpr},
       {"fpr_undefined", r.fpr_undefined},
       {"mean_runtime_s", r.mean_runtime_s}};
  put_optional(j, "mean_tau", r.mean_tau);
}

void from_json(const nlohmann::json& j, BenchmarkReport& r) {
  j.at("function").get_to(r.function);
  j.at("p").get_to(r.p);
  j.at("rho").get_to(r.rho);
  j.at("n").get_to(r.n);
  j.at("replications").get_to(r.replications);
  j.at("method").get_to(r.method);
  j.at("response").get_to(r.response);
  j.at("n_inner").get_to(r.n_inner);
  j.at("seed").get_to(r.seed);
  j.at("true_set").get_to(r.true_set);
  j.at("groundtruth").get_to(r.groundtruth);
  j.at("runs").get_to(r.runs);
  j.at("exact_rate").get_to(r.exact_rate);
  j.at("mean_tpr").get_to(r.mean_tpr);
  j.at("mean_fpr").get_to(r.mean_fpr);
  j.at("fpr_undefined").get_to(r.fpr_undefined);
  j.at("mean_runtime_s").get_to(r.mean_runtime_s);
  get_optional(j, "mean_tau", r.mean_tau);
}

std::string format_table(const EstimateReport& r) {
  std::ostringstream out;
  const std::size_t w = widest(r.factors, 6);
  out << std::left << std::setw(static_cast<int>(w)) << "factor" << "  s_tot\n";
  for (std::size_t i = 0; i < r.factors.size(); ++i) {
    out << std::left << std::setw(static_cast<int>(w)) << r.factors[i] << "  " << fixed(r.s_tot[i])
        << '\n';
  }
  out << "total_var " << fixed(r.total_var) << "  noise_var " << fixed(r.noise_var)
      << "  signal_var " << fixed(r.signal_var) << '\n';
  append_notes(out, r.notes);
  return out.str();
}

std::string format_table(const SelectReport& r) {
  std::ostringstream out;
  const std::size_t w = widest(r.factors, 6);
  out << std::left << std::setw(static_cast<int>(w)) << "factor" << "  selected  importance\n";
  for (std::size_t i = 0; i < r.factors.size(); ++i) {
    const bool chosen = std::ranges::find(r.trace.final_active, i) != r.trace.final_active.end();
    out << std::left << std::setw(static_cast<int>(w)) << r.factors[i] << "  "
        << std::setw(8) << (chosen ? "yes" : "no") << "  " << fixed(r.trace.importance[i]) << '\n';
  }
  out << "method " << r.method << "  forward sweeps " << r.trace.forward_steps
      << "  elimination rounds " << r.trace.elimination_rounds << '\n';
  append_notes(out, r.notes);
  return out.str();
}

std::string format_table(const BenchmarkReport& r) {
  std::ostringstream out;
  out << r.function << "  p=" << r.p << "  rho=" << r.rho << "  n=" << r.n
      << "  reps=" << r.replications << "  method=" << r.method << "  response=" << r.response
      << '\n';
  out << std::left << std::setw(10) << "tau" << std::setw(10) << "exact" << std::setw(10) << "tpr"
      << std::setw(10) << "fpr" << "runtime_s\n";
  out << std::left << std::setw(10) << (r.mean_tau ? fixed(*r.mean_tau, 3) : std::string("n/a"))
      << std::setw(10) << fixed(r.exact_rate, 3) << std::setw(10) << fixed(r.mean_tpr, 3)
      << std::setw(10) << fixed(r.mean_fpr, 3) << fixed(r.mean_runtime_s, 3) << '\n';
  return out.str();
}

}  // namespace first::cli
