#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "first/dataset.hpp"
#include "first/estimators.hpp"

namespace first {

enum class StepAction { add, eliminate, prune };

std::string to_string(StepAction action);

struct SelectionStep {
  StepAction action = StepAction::add;
  std::size_t factor = 0;
  /// V_A after the addition for `add`, V_{A+i} for `prune`, and the clipped
  /// total index that triggered removal for `eliminate`.
  double criterion = 0.0;

  friend bool operator==(const SelectionStep&, const SelectionStep&) = default;
};

struct SelectionTrace {
  std::vector<SelectionStep> steps;
  std::vector<std::size_t> final_active;  // ascending factor indices
  std::vector<double> importance;         // length p, zero off final_active
  std::size_t forward_steps = 0;          // candidate sweeps performed
  std::size_t elimination_rounds = 0;     // NANNE runs inside backward elimination
  std::vector<std::size_t> candidate_sizes;  // |C| at the start of each sweep
  std::string outer_sampling;             // how outer rows were chosen

  friend bool operator==(const SelectionTrace&, const SelectionTrace&) = default;
};

struct BackwardResult {
  std::vector<double> s_tot;              // length p, zero for eliminated factors
  std::vector<std::size_t> survivors;     // ascending
  std::vector<SelectionStep> eliminated;  // in elimination order
  std::size_t rounds = 0;                 // NANNE runs
};

/// Backward elimination: repeatedly drop factors whose total index clips to
/// zero and re-estimate on the survivors, until every survivor is strictly
/// positive or none remain.
BackwardResult nanne_be(const EncodedMatrix& m, std::span<const double> y,
                        std::span<const std::size_t> factors, const EstimatorConfig& cfg);

/// Greedy forward selection on explainable variance followed by backward
/// elimination. The factor with the largest V_{A+i} is added while it
/// strictly improves on V_A; ties go to the lowest factor index.
SelectionTrace first_select(const EncodedMatrix& m, std::span<const double> y,
                            const EstimatorConfig& cfg);

/// As first_select, but a candidate whose addition would lower V_A is
/// dropped from consideration for the rest of the search.
SelectionTrace first_fast_select(const EncodedMatrix& m, std::span<const double> y,
                                 const EstimatorConfig& cfg);

}  // namespace first
