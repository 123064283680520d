#include "first/cli/metrics.hpp"

#include <cmath>
#include <set>

#include "first/error.hpp"

namespace first::cli {

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

double kendall_tau(std::span<const double> truth, std::span<const double> estimate,
                   KendallVariant variant) {
  if (truth.size() != estimate.size()) throw InputError("kendall_tau: length mismatch");
  if (truth.size() < 2) throw InputError("kendall_tau needs at least 2 entries");
  const std::size_t p = truth.size();
  long long score = 0;
  long long ties_truth = 0;
  long long ties_estimate = 0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const int st = sign(truth[i] - truth[j]);
      const int se = sign(estimate[i] - estimate[j]);
      score += st * se;
      ties_truth += st == 0;
      ties_estimate += se == 0;
    }
  }
  const auto pairs = static_cast<long long>(p * (p - 1) / 2);
  if (variant == KendallVariant::a) return static_cast<double>(score) / static_cast<double>(pairs);
  const double denom = std::sqrt(static_cast<double>(pairs - ties_truth) *
                                 static_cast<double>(pairs - ties_estimate));
  return denom > 0.0 ? static_cast<double>(score) / denom : 0.0;
}

SelectionMetrics selection_metrics(std::span<const std::size_t> true_set,
                                   std::span<const std::size_t> selected, std::size_t p) {
  const std::set<std::size_t> truth(true_set.begin(), true_set.end());
  const std::set<std::size_t> chosen(selected.begin(), selected.end());
  if (truth.empty()) throw InputError("selection metrics need a non-empty true set");
  for (std::size_t f : truth) {
    if (f >= p) throw InputError("true factor index out of range");
  }
  for (std::size_t f : chosen) {
    if (f >= p) throw InputError("selected factor index out of range");
  }
  std::size_t hits = 0;
  for (std::size_t f : chosen) hits += truth.contains(f);
  const std::size_t false_hits = chosen.size() - hits;

  SelectionMetrics m;
  m.exact = chosen == truth;
  m.tpr = static_cast<double>(hits) / static_cast<double>(truth.size());
  if (truth.size() == p) {
    m.fpr_undefined = true;
  } else {
    m.fpr = static_cast<double>(false_hits) / static_cast<double>(p - truth.size());
  }
  return m;
}

}  // namespace first::cli
