#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "iotmm/counter_rng.hpp"
#include "iotmm/errors.hpp"
#include "iotmm/inventory.hpp"
#include "iotmm/valuation.hpp"

namespace iotmm {

struct VarConfig {
  std::uint32_t horizon_months = 12;  // one financial year by default
  double confidence = 0.95;           // exclusive (0, 1)
  std::uint64_t paths = 0;
  std::uint64_t seed = 0;

  bool operator==(const VarConfig&) const = default;
};

inline std::vector<std::string> validate_config(const VarConfig& config) {
  std::vector<std::string> violations;
  if (config.horizon_months == 0) violations.push_back("horizon_months must be positive");
  if (!std::isfinite(config.confidence) || config.confidence <= 0.0 || config.confidence >= 1.0) {
    violations.push_back("confidence must lie in (0, 1) exclusive");
  }
  if (config.paths == 0) violations.push_back("paths must be >= 1");
  return violations;
}

// Loss distribution of one Monte Carlo run. var_at_confidence is the
// nearest-rank empirical quantile of the path losses; the standard error is
// for the mean (sample standard deviation / sqrt(paths)), not the quantile.
struct LossDistributionSummary {
  Money var_at_confidence = 0.0;
  Money mean_loss = 0.0;
  Money max_loss = 0.0;
  std::uint64_t path_count = 0;
  std::uint64_t seed = 0;
  Money standard_error_estimate = 0.0;

  bool operator==(const LossDistributionSummary&) const = default;
};

namespace detail {

inline void require_valid_config(const VarConfig& config) {
  auto violations = validate_config(config);
  if (violations.empty()) return;
  std::string joined;
  for (const auto& v : violations) {
    if (!joined.empty()) joined += "; ";
    joined += v;
  }
  raise(ErrorCode::validation_error, "invalid var config: " + joined);
}

inline void require_confidence_level(double confidence) {
  if (!std::isfinite(confidence) || confidence < 0.0 || confidence > 1.0) {
    raise(ErrorCode::validation_error, "confidence must lie in [0, 1]");
  }
}

}  // namespace detail

// Probability that an asset suffers digital death within the horizon.
// Exposures are micromorts per 12 months; scaling is linear in months and
// clamped to certainty.
inline double death_probability(double residual_exposure_mm, std::uint32_t horizon_months) {
  const double p = residual_exposure_mm * kMicromortToProbability *
                   (static_cast<double>(horizon_months) / 12.0);
  return std::clamp(p, 0.0, 1.0);
}

// Nearest-rank quantile: the ceil(confidence * n)-th smallest sample,
// 1-indexed and clamped to [1, n]. The rank is computed with a small guard so
// decimal confidences behave as written: 0.95 * 100000 selects rank 95000
// even though the product rounds a hair above it in binary.
inline double nearest_rank_quantile(const std::vector<double>& sorted_losses, double confidence) {
  const auto n = sorted_losses.size();
  const double scaled = confidence * static_cast<double>(n);
  const double whole = std::floor(scaled);
  const double guard = 1e-9 + scaled * 1e-12;
  std::uint64_t rank = static_cast<std::uint64_t>(whole);
  if (scaled - whole > guard) ++rank;
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return sorted_losses[rank - 1];
}

// Expected 12-month loss: sum over assets of value x severity x probability
// of digital death. Exact deterministic arithmetic; the Monte Carlo engine is
// the distributional refinement of this number.
inline Money point_var(const Thing& thing) {
  detail::require_valid_inventory(thing);
  Money total = 0.0;
  for (const auto& asset : thing.assets) {
    total += asset.value * asset.severity_fraction *
             (asset.residual_exposure_mm * kMicromortToProbability);
  }
  return total;
}

// Simulates the per-path aggregate losses, in path order. Each asset dies
// independently on each path with its horizon-scaled death probability,
// losing value x severity. Draw (path, i) comes from the counter stream, so
// the returned vector is bit-identical for a given (inventory, config) no
// matter how many workers split the path range. workers = 0 picks the
// hardware concurrency.
inline std::vector<double> simulate_losses(const Thing& thing, const VarConfig& config,
                                           unsigned workers = 0) {
  detail::require_valid_inventory(thing);
  detail::require_valid_config(config);

  const std::size_t asset_count = thing.assets.size();
  std::vector<double> loss_on_death(asset_count);
  std::vector<double> p_death(asset_count);
  for (std::size_t i = 0; i < asset_count; ++i) {
    loss_on_death[i] = thing.assets[i].value * thing.assets[i].severity_fraction;
    p_death[i] = death_probability(thing.assets[i].residual_exposure_mm, config.horizon_months);
  }

  std::vector<double> losses(config.paths);
  const CounterStream stream(config.seed);
  auto run_block = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t path = begin; path < end; ++path) {
      double loss = 0.0;
      for (std::size_t i = 0; i < asset_count; ++i) {
        if (stream.uniform(path, i) < p_death[i]) loss += loss_on_death[i];
      }
      losses[path] = loss;
    }
  };

  unsigned worker_count = workers != 0 ? workers : std::thread::hardware_concurrency();
  if (worker_count == 0) worker_count = 1;
  if (static_cast<std::uint64_t>(worker_count) > config.paths) {
    worker_count = static_cast<unsigned>(config.paths);
  }

  if (worker_count <= 1) {
    run_block(0, config.paths);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (unsigned w = 0; w < worker_count; ++w) {
      const std::uint64_t begin = config.paths * w / worker_count;
      const std::uint64_t end = config.paths * (w + 1) / worker_count;
      pool.emplace_back(run_block, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return losses;
}

// Reduces path losses to a summary. All reductions run over the path-ordered
// vector on one thread, so the summary inherits the simulation's
// worker-count independence.
inline LossDistributionSummary summarize_losses(const std::vector<double>& path_losses,
                                                const VarConfig& config) {
  if (path_losses.empty()) {
    raise(ErrorCode::validation_error, "cannot summarize an empty loss vector");
  }
  std::vector<double> sorted = path_losses;
  std::sort(sorted.begin(), sorted.end());

  const auto n = path_losses.size();
  double sum = 0.0;
  for (double loss : path_losses) sum += loss;
  const double mean = sum / static_cast<double>(n);

  double sq_dev = 0.0;
  for (double loss : path_losses) sq_dev += (loss - mean) * (loss - mean);
  const double sample_sd = n > 1 ? std::sqrt(sq_dev / static_cast<double>(n - 1)) : 0.0;

  LossDistributionSummary summary;
  summary.var_at_confidence = nearest_rank_quantile(sorted, config.confidence);
  summary.mean_loss = mean;
  summary.max_loss = sorted.back();
  summary.path_count = n;
  summary.seed = config.seed;
  summary.standard_error_estimate = sample_sd / std::sqrt(static_cast<double>(n));
  return summary;
}

inline LossDistributionSummary monte_carlo_var(const Thing& thing, const VarConfig& config,
                                               unsigned workers = 0) {
  return summarize_losses(simulate_losses(thing, config, workers), config);
}

// Exact loss distribution by 2^n enumeration of death/survive outcomes:
// (loss, probability) atoms with equal losses merged, ascending by loss.
// Per-outcome losses accumulate in asset order, matching the simulator, so
// every simulated path loss is bitwise equal to some atom.
inline std::vector<std::pair<double, double>> exhaustive_distribution(
    const Thing& thing, std::uint32_t horizon_months) {
  detail::require_valid_inventory(thing);
  if (horizon_months == 0) {
    raise(ErrorCode::validation_error, "horizon_months must be positive");
  }
  const std::size_t asset_count = thing.assets.size();
  if (asset_count > 20) {
    raise(ErrorCode::too_large, "exhaustive enumeration is capped at 20 assets, got " +
                                    std::to_string(asset_count));
  }

  std::vector<double> loss_on_death(asset_count);
  std::vector<double> p_death(asset_count);
  for (std::size_t i = 0; i < asset_count; ++i) {
    loss_on_death[i] = thing.assets[i].value * thing.assets[i].severity_fraction;
    p_death[i] = death_probability(thing.assets[i].residual_exposure_mm, horizon_months);
  }

  const std::uint64_t outcome_count = std::uint64_t{1} << asset_count;
  std::vector<std::pair<double, double>> outcomes;
  outcomes.reserve(outcome_count);
  for (std::uint64_t mask = 0; mask < outcome_count; ++mask) {
    double loss = 0.0;
    double prob = 1.0;
    for (std::size_t i = 0; i < asset_count; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        loss += loss_on_death[i];
        prob *= p_death[i];
      } else {
        prob *= 1.0 - p_death[i];
      }
    }
    outcomes.emplace_back(loss, prob);
  }
  std::sort(outcomes.begin(), outcomes.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<std::pair<double, double>> atoms;
  for (const auto& [loss, prob] : outcomes) {
    if (!atoms.empty() && atoms.back().first == loss) {
      atoms.back().second += prob;
    } else {
      atoms.emplace_back(loss, prob);
    }
  }
  return atoms;
}

// Exact confidence-quantile of the enumerated loss distribution: the smallest
// loss whose cumulative probability reaches the confidence level.
inline Money exhaustive_var(const Thing& thing, double confidence, std::uint32_t horizon_months) {
  detail::require_confidence_level(confidence);
  const auto atoms = exhaustive_distribution(thing, horizon_months);
  double cumulative = 0.0;
  for (const auto& [loss, prob] : atoms) {
    cumulative += prob;
    if (cumulative >= confidence) return loss;
  }
  return atoms.back().first;  // cumulative fell short of 1 by rounding
}

// Nearest-rank empirical quantile of recorded losses.
inline Money historical_var(const std::vector<Money>& losses, double confidence) {
  if (losses.empty()) {
    raise(ErrorCode::empty_history, "historical loss list is empty");
  }
  detail::require_confidence_level(confidence);
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (!std::isfinite(losses[i]) || losses[i] < 0.0) {
      raise(ErrorCode::validation_error,
            "losses[" + std::to_string(i) + "] must be a finite amount >= 0");
    }
  }
  std::vector<double> sorted = losses;
  std::sort(sorted.begin(), sorted.end());
  return nearest_rank_quantile(sorted, confidence);
}

// The 12-month VaR: the loss limit a thing can afford from cyber incidents
// over one financial year. This is the budget-planning figure priced by
// micromort_reduction_value.
inline Money loss_limit_12m(const Thing& thing, VarConfig config, unsigned workers = 0) {
  config.horizon_months = 12;
  return monte_carlo_var(thing, config, workers).var_at_confidence;
}

}  // namespace iotmm
