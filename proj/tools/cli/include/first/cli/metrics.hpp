#pragma once

#include <cstddef>
#include <span>

namespace first::cli {

enum class KendallVariant {
  a,  // 2/(p(p-1)) * sum sign(dx) sign(dy); tied pairs count 0
  b,  // tie-corrected: divides by sqrt((n0 - ties_x)(n0 - ties_y))
};

/// Kendall rank correlation between a ground-truth and an estimated
/// importance vector. Both variants coincide when neither vector has ties.
/// Variant b is 0 when either vector is constant. Throws InputError for
/// mismatched lengths or fewer than 2 entries.
double kendall_tau(std::span<const double> truth, std::span<const double> estimate,
                   KendallVariant variant = KendallVariant::b);

struct SelectionMetrics {
  bool exact = false;
  double tpr = 0.0;
  double fpr = 0.0;
  bool fpr_undefined = false;  // every factor is a true one; fpr reported as 0
};

/// Exact recovery, true and false positive rate of a selected factor set
/// against the true set, both as 0-based indices below p.
SelectionMetrics selection_metrics(std::span<const std::size_t> true_set,
                                   std::span<const std::size_t> selected, std::size_t p);

}  // namespace first::cli
