#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "first/dataset.hpp"

namespace first {

enum class SubsampleMode { without_replacement, with_replacement };

/// Knobs shared by every nearest-neighbour variance estimate.
struct EstimatorConfig {
  /// Inner-loop neighbour count (k of the within-kth-distance rule).
  std::size_t n_inner = 2;
  /// Outer-loop size; empty means every row is an outer point.
  std::optional<std::size_t> n_outer;
  SubsampleMode subsample = SubsampleMode::without_replacement;
  std::uint64_t seed = 0;
  /// Worker threads for the outer loop; 0 picks the runtime default. Results
  /// do not depend on this value.
  std::size_t workers = 0;

  /// Throws InputError unless n_inner >= 2, n_inner <= rows and, when set,
  /// 1 <= n_outer <= rows.
  void validate(std::size_t rows) const;
};

/// 2 for regression, 3 for a binary response.
std::size_t default_inner_count(bool binary_response) noexcept;

struct ImportanceResult {
  std::vector<double> s_tot;   // clipped below at 0, never above
  double noise_var = 0.0;      // nearest-neighbour estimate of Var[eps]
  double signal_var = 0.0;     // max(total_var - noise_var, 0)
  double total_var = 0.0;      // sample variance of y
  std::vector<bool> selected;  // filled by the selection routines
  std::vector<std::string> warnings;
};

/// Unbiased (N-1) sample variance. Throws InputError for N < 2.
double total_variance(std::span<const double> y);

/// Outer-loop rows for a dataset of `rows` rows. Every row, in order, when
/// cfg.n_outer is unset; otherwise a subsample drawn from the RNG stream
/// (cfg.seed, stream).
std::vector<std::size_t> outer_rows(std::size_t rows, const EstimatorConfig& cfg,
                                    std::uint64_t stream = 0);

/// Mean over the outer rows of the sample variance of y across each row's
/// within-kth-distance neighbour set in the subspace of `factors`.
///
/// With factors = all of 1:p this estimates Var[eps]; with the complement of
/// {i} it estimates T_i + Var[eps]; with a selected set u it estimates the
/// residual variance left after conditioning on X_u.
double conditional_variance_effect(const EncodedMatrix& m, std::span<const double> y,
                                   std::span<const std::size_t> factors,
                                   const EstimatorConfig& cfg);

/// Same, with explicit outer rows (shared across several calls so that the
/// estimates are comparable).
double conditional_variance_effect(const EncodedMatrix& m, std::span<const double> y,
                                   std::span<const std::size_t> factors,
                                   std::span<const std::size_t> outer, std::size_t n_inner,
                                   std::size_t workers);

/// Noise-adjusted nearest-neighbour total Sobol' indices for every factor.
ImportanceResult nanne(const EncodedMatrix& m, std::span<const double> y,
                       const EstimatorConfig& cfg);

/// NANNE on the data restricted to `factors`; s_tot[j] belongs to factors[j].
ImportanceResult nanne(const EncodedMatrix& m, std::span<const double> y,
                       std::span<const std::size_t> factors, const EstimatorConfig& cfg);

/// Plain nearest-neighbour total indices T_i^nn / Var[Y] without any noise
/// correction. Biased upwards on noisy data; kept as a reference estimator.
std::vector<double> nearest_neighbor_total_indices(const EncodedMatrix& m,
                                                   std::span<const double> y,
                                                   const EstimatorConfig& cfg);

/// V_u = Var[Y] - T_{-u}: the output variance explainable by X_u. Zero for
/// the empty set. Not clipped.
double explainable_variance(const EncodedMatrix& m, std::span<const double> y,
                            std::span<const std::size_t> selected, const EstimatorConfig& cfg);

}  // namespace first
