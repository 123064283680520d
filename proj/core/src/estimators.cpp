#include "first/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "first/error.hpp"
#include "first/neighbors.hpp"
#include "first/parallel.hpp"

namespace first {

void EstimatorConfig::validate(std::size_t rows) const {
  if (n_inner < 2) throw InputError("n_inner must be at least 2");
  if (n_inner > rows) throw InputError("n_inner exceeds the number of rows");
  if (n_outer && (*n_outer == 0 || *n_outer > rows)) {
    throw InputError("n_outer must lie in [1, N]");
  }
}

std::size_t default_inner_count(bool binary_response) noexcept { return binary_response ? 3 : 2; }

namespace {

// Sum of values accumulated in ascending order: the result is independent of
// the order in which the values were produced.
double ordered_sum(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  return std::accumulate(values.begin(), values.end(), 0.0);
}

double sample_variance(std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  const double mean = ordered_sum(values) / n;
  for (double& v : values) v = (v - mean) * (v - mean);
  return ordered_sum(values) / (n - 1.0);
}

std::vector<std::size_t> all_factors(std::size_t p) {
  std::vector<std::size_t> f(p);
  std::iota(f.begin(), f.end(), std::size_t{0});
  return f;
}

void check_response(const EncodedMatrix& m, std::span<const double> y) {
  if (y.size() != m.rows()) throw InputError("response length does not match the feature rows");
}

}  // namespace

double total_variance(std::span<const double> y) {
  if (y.size() < 2) throw InputError("variance needs at least 2 observations");
  std::vector<double> values(y.begin(), y.end());
  return sample_variance(values);
}

std::vector<std::size_t> outer_rows(std::size_t rows, const EstimatorConfig& cfg,
                                    std::uint64_t stream) {
  std::vector<std::size_t> out;
  if (!cfg.n_outer) {
    out.resize(rows);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
  }
  const std::size_t count = *cfg.n_outer;
  if (count == 0 || count > rows) throw InputError("n_outer must lie in [1, N]");
  std::mt19937_64 rng(mix_seed(cfg.seed, stream));
  if (cfg.subsample == SubsampleMode::with_replacement) {
    std::uniform_int_distribution<std::size_t> pick(0, rows - 1);
    out.resize(count);
    for (auto& r : out) r = pick(rng);
  } else {
    // Partial Fisher-Yates.
    std::vector<std::size_t> pool(rows);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, rows - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    out.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double conditional_variance_effect(const EncodedMatrix& m, std::span<const double> y,
                                   std::span<const std::size_t> factors,
                                   std::span<const std::size_t> outer, std::size_t n_inner,
                                   std::size_t workers) {
  check_response(m, y);
  if (outer.empty()) throw InputError("outer loop needs at least one row");
  const NeighborIndex index(m, factors);
  workers = resolve_workers(workers);

  std::vector<double> slot(outer.size());
  std::vector<NeighborIndex::Scratch> scratch(workers);
  std::vector<std::vector<Neighbor>> hits(workers);
  std::vector<std::vector<double>> values(workers);
  parallel_for_worker(outer.size(), workers, [&](std::size_t i, std::size_t w) {
    index.within_kth(outer[i], n_inner, scratch[w], hits[w]);
    auto& vals = values[w];
    vals.clear();
    for (const auto& h : hits[w]) vals.push_back(y[h.row]);
    slot[i] = sample_variance(vals);
  });
  return ordered_sum(slot) / static_cast<double>(outer.size());
}

double conditional_variance_effect(const EncodedMatrix& m, std::span<const double> y,
                                   std::span<const std::size_t> factors,
                                   const EstimatorConfig& cfg) {
  cfg.validate(m.rows());
  const auto outer = outer_rows(m.rows(), cfg);
  return conditional_variance_effect(m, y, factors, outer, cfg.n_inner, cfg.workers);
}

ImportanceResult nanne(const EncodedMatrix& m, std::span<const double> y,
                       std::span<const std::size_t> factors, const EstimatorConfig& cfg) {
  check_response(m, y);
  cfg.validate(m.rows());
  if (factors.empty()) throw InputError("NANNE needs at least one factor");
  const auto outer = outer_rows(m.rows(), cfg);

  ImportanceResult result;
  result.s_tot.assign(factors.size(), 0.0);
  result.selected.assign(factors.size(), false);
  result.total_var = total_variance(y);
  result.noise_var = conditional_variance_effect(m, y, factors, outer, cfg.n_inner, cfg.workers);
  result.signal_var = std::max(result.total_var - result.noise_var, 0.0);
  if (!(result.signal_var > 0.0)) {
    result.warnings.emplace_back("signal variance zero");
    return result;
  }

  std::vector<std::size_t> rest;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    rest.clear();
    for (std::size_t l = 0; l < factors.size(); ++l) {
      if (l != j) rest.push_back(factors[l]);
    }
    // Conditioning on nothing leaves the whole output variance.
    const double with_noise =
        rest.empty() ? result.total_var
                     : conditional_variance_effect(m, y, rest, outer, cfg.n_inner, cfg.workers);
    const double effect = std::max(with_noise - result.noise_var, 0.0);
    result.s_tot[j] = effect / result.signal_var;
    if (result.s_tot[j] > 1.0) {
      std::ostringstream msg;
      msg << "total index of factor " << factors[j] << " exceeds 1 (" << result.s_tot[j] << ")";
      result.warnings.push_back(msg.str());
    }
  }
  return result;
}

ImportanceResult nanne(const EncodedMatrix& m, std::span<const double> y,
                       const EstimatorConfig& cfg) {
  const auto factors = all_factors(m.factors());
  return nanne(m, y, factors, cfg);
}

std::vector<double> nearest_neighbor_total_indices(const EncodedMatrix& m,
                                                   std::span<const double> y,
                                                   const EstimatorConfig& cfg) {
  check_response(m, y);
  cfg.validate(m.rows());
  const auto outer = outer_rows(m.rows(), cfg);
  const double var_y = total_variance(y);
  const std::size_t p = m.factors();
  std::vector<double> s(p, 0.0);
  if (!(var_y > 0.0)) return s;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < p; ++i) {
    rest.clear();
    for (std::size_t l = 0; l < p; ++l) {
      if (l != i) rest.push_back(l);
    }
    const double t = rest.empty()
                         ? var_y
                         : conditional_variance_effect(m, y, rest, outer, cfg.n_inner, cfg.workers);
    s[i] = t / var_y;
  }
  return s;
}

double explainable_variance(const EncodedMatrix& m, std::span<const double> y,
                            std::span<const std::size_t> selected, const EstimatorConfig& cfg) {
  if (selected.empty()) return 0.0;
  return total_variance(y) - conditional_variance_effect(m, y, selected, cfg);
}

}  // namespace first
