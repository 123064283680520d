#include "first/selection.hpp"

#include <algorithm>
#include <numeric>

#include "first/error.hpp"
#include "first/parallel.hpp"

namespace first {

std::string to_string(StepAction action) {
  switch (action) {
    case StepAction::add:
      return "add";
    case StepAction::eliminate:
      return "eliminate";
    case StepAction::prune:
      return "prune";
  }
  return "unknown";
}

namespace {

// RNG stream ids. Forward sweeps and elimination rounds draw their outer
// subsamples from disjoint streams of the configured seed.
constexpr std::uint64_t kForwardStream = 0x1000;
constexpr std::uint64_t kBackwardStream = 0x2000;

EstimatorConfig with_stream(const EstimatorConfig& cfg, std::uint64_t stream) {
  EstimatorConfig out = cfg;
  out.seed = mix_seed(cfg.seed, stream);
  return out;
}

std::string describe_outer(const EstimatorConfig& cfg) {
  if (!cfg.n_outer) return "all rows";
  return std::to_string(*cfg.n_outer) +
         (cfg.subsample == SubsampleMode::with_replacement ? " rows with replacement"
                                                           : " rows without replacement") +
         ", one subsample per forward sweep shared by its candidates, one per elimination round";
}

struct ForwardResult {
  std::vector<std::size_t> active;  // insertion order
  std::vector<SelectionStep> steps;
  std::vector<std::size_t> candidate_sizes;
  std::size_t sweeps = 0;
};

ForwardResult forward_select(const EncodedMatrix& m, std::span<const double> y,
                             const EstimatorConfig& cfg, bool prune) {
  const std::size_t p = m.factors();
  const double var_y = total_variance(y);
  const std::size_t workers = resolve_workers(cfg.workers);

  ForwardResult out;
  std::vector<std::size_t> candidates(p);
  std::iota(candidates.begin(), candidates.end(), std::size_t{0});
  double current = 0.0;  // V of the empty set

  while (!candidates.empty()) {
    out.candidate_sizes.push_back(candidates.size());
    const auto outer = outer_rows(m.rows(), with_stream(cfg, kForwardStream + out.sweeps));
    ++out.sweeps;

    std::vector<double> explained(candidates.size());
    // Candidates run in parallel; each estimate is itself sequential.
    parallel_for(candidates.size(), workers, [&](std::size_t c) {
      std::vector<std::size_t> trial = out.active;
      trial.push_back(candidates[c]);
      std::sort(trial.begin(), trial.end());
      explained[c] = var_y - conditional_variance_effect(m, y, trial, outer, cfg.n_inner, 1);
    });

    // candidates stay sorted, so the first maximum is the lowest index.
    const auto best_it = std::max_element(explained.begin(), explained.end());
    const std::size_t best = static_cast<std::size_t>(best_it - explained.begin());
    const std::size_t best_factor = candidates[best];
    const double best_value = *best_it;

    if (prune) {
      std::vector<std::size_t> kept;
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (explained[c] < current) {
          out.steps.push_back({StepAction::prune, candidates[c], explained[c]});
        } else {
          kept.push_back(candidates[c]);
        }
      }
      candidates = std::move(kept);
    }

    if (!(best_value > current)) break;
    out.active.push_back(best_factor);
    out.steps.push_back({StepAction::add, best_factor, best_value});
    current = best_value;
    candidates.erase(std::remove(candidates.begin(), candidates.end(), best_factor),
                     candidates.end());
  }
  return out;
}

SelectionTrace finish(const EncodedMatrix& m, std::span<const double> y,
                      const EstimatorConfig& cfg, ForwardResult forward) {
  SelectionTrace trace;
  trace.steps = std::move(forward.steps);
  trace.candidate_sizes = std::move(forward.candidate_sizes);
  trace.forward_steps = forward.sweeps;
  trace.outer_sampling = describe_outer(cfg);
  trace.importance.assign(m.factors(), 0.0);
  if (forward.active.empty()) return trace;

  std::sort(forward.active.begin(), forward.active.end());
  BackwardResult backward = nanne_be(m, y, forward.active, cfg);
  trace.steps.insert(trace.steps.end(), backward.eliminated.begin(), backward.eliminated.end());
  trace.elimination_rounds = backward.rounds;
  trace.final_active = std::move(backward.survivors);
  trace.importance = std::move(backward.s_tot);
  return trace;
}

}  // namespace

BackwardResult nanne_be(const EncodedMatrix& m, std::span<const double> y,
                        std::span<const std::size_t> factors, const EstimatorConfig& cfg) {
  if (factors.empty()) throw InputError("backward elimination needs at least one factor");
  for (std::size_t f : factors) {
    if (f >= m.factors()) throw InputError("factor index out of range");
  }
  BackwardResult out;
  out.s_tot.assign(m.factors(), 0.0);

  std::vector<std::size_t> active(factors.begin(), factors.end());
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());

  while (!active.empty()) {
    const ImportanceResult est =
        nanne(m, y, active, with_stream(cfg, kBackwardStream + out.rounds));
    ++out.rounds;

    std::vector<std::size_t> survivors;
    for (std::size_t j = 0; j < active.size(); ++j) {
      if (est.s_tot[j] > 0.0) {
        survivors.push_back(active[j]);
      } else {
        out.eliminated.push_back({StepAction::eliminate, active[j], est.s_tot[j]});
      }
    }
    if (survivors.size() == active.size()) {
      for (std::size_t j = 0; j < active.size(); ++j) out.s_tot[active[j]] = est.s_tot[j];
      break;
    }
    active = std::move(survivors);
  }
  out.survivors = active;
  return out;
}

SelectionTrace first_select(const EncodedMatrix& m, std::span<const double> y,
                            const EstimatorConfig& cfg) {
  if (y.size() != m.rows()) throw InputError("response length does not match the feature rows");
  cfg.validate(m.rows());
  return finish(m, y, cfg, forward_select(m, y, cfg, false));
}

SelectionTrace first_fast_select(const EncodedMatrix& m, std::span<const double> y,
                                 const EstimatorConfig& cfg) {
  if (y.size() != m.rows()) throw InputError("response length does not match the feature rows");
  cfg.validate(m.rows());
  return finish(m, y, cfg, forward_select(m, y, cfg, true));
}

}  // namespace first
