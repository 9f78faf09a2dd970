#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iotmm/errors.hpp"
#include "iotmm/format.hpp"

namespace iotmm {

// Monetary amounts are plain IEEE doubles; the currency code is carried once
// per scenario and never converted.
using Money = double;
using Probability = double;

// One micromort = a one-in-a-million probability of digital death. Exposures
// are stored in micromorts and converted to plain probability only inside the
// VaR engine.
inline constexpr double kMicromortToProbability = 1e-6;
inline constexpr double kMaxResidualExposureMm = 1e6;  // certainty

// Value-role class: core value assets (goods/services the thing profits from
// directly) vs operational assets (supporting creation and distribution).
enum class ValueRole { core, operational };

// Origin class: digitised from a physical equivalent vs born digital.
enum class AssetOrigin { digitised, born_digital };

enum class ValuationBasis { intrinsic, market, subjective };

// Risk-strategy taxonomy tags; metadata only, nothing computes on them.
enum class StrategyTag { identification, estimation, prioritisation };

struct DigitalAsset {
  std::string id;    // unique within a Thing
  std::string name;
  ValueRole value_role = ValueRole::core;
  AssetOrigin origin = AssetOrigin::born_digital;
  ValuationBasis valuation = ValuationBasis::subjective;
  Money value = 0.0;                  // economic value lost on digital death
  double residual_exposure_mm = 0.0;  // micromorts over a 12-month horizon
  double severity_fraction = 1.0;     // share of value lost; 1.0 = total loss

  bool operator==(const DigitalAsset&) const = default;
};

// Key cyber risk factors of a thing. Scores are unit-free positive numbers;
// pick one common scale per assessment.
struct KiotcrfProfile {
  double inherent_risk = 1.0;
  double control_effectiveness = 1.0;
  std::string technological;      // free-text notes
  std::string non_technological;  // free-text notes

  bool operator==(const KiotcrfProfile&) const = default;
};

struct Thing {
  std::string id;
  std::string name;
  std::vector<DigitalAsset> assets;
  KiotcrfProfile risk_factors;
  std::set<StrategyTag> strategy_tags;

  bool operator==(const Thing&) const = default;
};

struct MicroMortObservation {
  std::string label;
  std::uint64_t vulnerable_count = 0;
  std::uint64_t total_count = 0;

  bool operator==(const MicroMortObservation&) const = default;
};

// One labelled state a vertical can be in, with the probabilities needed for
// the state-conditioned attack probability.
struct StateProbabilities {
  Probability p_joint_given_state = 0.0;  // P(attack & vertical | state)
  Probability p_t_given_state = 0.0;      // P(vertical | state)

  bool operator==(const StateProbabilities&) const = default;
};

// Inputs for the vertical/vertex conditional-probability calculus. The two
// conditionals are always required; at least one of p_tx / p_t must be given
// for the case to be solvable.
struct VertexProbabilityCase {
  Probability p_tx_given_y = 0.0;  // P(attack | vertex)
  Probability p_tx_given_t = 0.0;  // P(attack | vertical)
  std::optional<Probability> p_tx;
  std::optional<Probability> p_t;
  std::map<std::string, StateProbabilities> states;

  bool operator==(const VertexProbabilityCase&) const = default;
};

namespace detail {

inline bool valid_probability(double p) {
  return std::isfinite(p) && p >= 0.0 && p <= 1.0;
}

}  // namespace detail

// Checks every type invariant of a Thing and its assets. Violations are data,
// not errors: the list is empty iff the inventory is valid. Messages name
// assets by id so the result is insensitive to asset order.
inline std::vector<std::string> validate_inventory(const Thing& thing) {
  std::vector<std::string> violations;
  std::set<std::string> seen;
  for (const auto& asset : thing.assets) {
    if (!seen.insert(asset.id).second) {
      violations.push_back("duplicate asset id '" + asset.id + "'");
    }
    const std::string who = "asset '" + asset.id + "': ";
    if (!std::isfinite(asset.value) || asset.value < 0.0) {
      violations.push_back(who + "value must be a finite amount >= 0");
    }
    if (!std::isfinite(asset.residual_exposure_mm) || asset.residual_exposure_mm < 0.0) {
      violations.push_back(who + "residual_exposure_mm must be finite and >= 0");
    } else if (asset.residual_exposure_mm > kMaxResidualExposureMm) {
      violations.push_back(who + "residual_exposure_mm exposure exceeds certainty (" +
                           format_full(asset.residual_exposure_mm) + " micromorts > 1000000)");
    }
    if (!std::isfinite(asset.severity_fraction) || asset.severity_fraction <= 0.0 ||
        asset.severity_fraction > 1.0) {
      violations.push_back(who + "severity_fraction must lie in (0, 1]");
    }
  }
  if (!std::isfinite(thing.risk_factors.inherent_risk) || thing.risk_factors.inherent_risk <= 0.0) {
    violations.push_back("risk_factors.inherent_risk must be finite and > 0");
  }
  if (!std::isfinite(thing.risk_factors.control_effectiveness) ||
      thing.risk_factors.control_effectiveness <= 0.0) {
    violations.push_back("risk_factors.control_effectiveness must be finite and > 0");
  }
  return violations;
}

inline std::vector<std::string> validate_observation(const MicroMortObservation& obs) {
  std::vector<std::string> violations;
  if (obs.total_count == 0) {
    violations.push_back("total_count must be positive");
  }
  if (obs.vulnerable_count > obs.total_count) {
    violations.push_back("vulnerable_count exceeds total_count");
  }
  return violations;
}

}  // namespace iotmm
