#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include "iotmm/errors.hpp"
#include "iotmm/inventory.hpp"

namespace iotmm {

namespace detail {

// Ops whose precondition is "thing passes validate_inventory" call this.
inline void require_valid_inventory(const Thing& thing) {
  auto violations = validate_inventory(thing);
  if (violations.empty()) return;
  std::string joined;
  for (const auto& v : violations) {
    if (!joined.empty()) joined += "; ";
    joined += v;
  }
  raise(ErrorCode::validation_error, "invalid inventory: " + joined);
}

}  // namespace detail

// Partition of an inventory along both classification axes. Ratios are
// value-weighted (sums of asset values); an absent ratio means the
// denominator class holds no value, which is a fact about the inventory, not
// an error. Counts are reported too so a count-weighted reading stays
// recoverable.
struct CompositionReport {
  std::size_t core_count = 0;
  std::size_t operational_count = 0;
  Money core_value_sum = 0.0;
  Money operational_value_sum = 0.0;
  std::optional<double> core_to_operational_ratio;

  std::size_t digitised_count = 0;
  std::size_t born_digital_count = 0;
  Money digitised_value_sum = 0.0;
  Money born_digital_value_sum = 0.0;
  std::optional<double> digitised_to_born_digital_ratio;

  bool operator==(const CompositionReport&) const = default;
};

inline CompositionReport composition(const Thing& thing) {
  detail::require_valid_inventory(thing);
  CompositionReport report;
  for (const auto& asset : thing.assets) {
    if (asset.value_role == ValueRole::core) {
      ++report.core_count;
      report.core_value_sum += asset.value;
    } else {
      ++report.operational_count;
      report.operational_value_sum += asset.value;
    }
    if (asset.origin == AssetOrigin::digitised) {
      ++report.digitised_count;
      report.digitised_value_sum += asset.value;
    } else {
      ++report.born_digital_count;
      report.born_digital_value_sum += asset.value;
    }
  }
  if (report.operational_value_sum > 0.0) {
    report.core_to_operational_ratio = report.core_value_sum / report.operational_value_sum;
  }
  if (report.born_digital_value_sum > 0.0) {
    report.digitised_to_born_digital_ratio =
        report.digitised_value_sum / report.born_digital_value_sum;
  }
  return report;
}

// Total digital value: the sum of all asset values across both classes.
inline Money total_digital_value(const Thing& thing) {
  detail::require_valid_inventory(thing);
  Money total = 0.0;
  for (const auto& asset : thing.assets) total += asset.value;
  return total;
}

// Residual cyber risk = inherent risk / control effectiveness. "No controls"
// must be modelled as a small positive effectiveness; an infinite score would
// poison every downstream aggregate.
inline double residual_risk(const KiotcrfProfile& profile) {
  if (!std::isfinite(profile.inherent_risk) || profile.inherent_risk <= 0.0) {
    raise(ErrorCode::validation_error, "inherent_risk must be finite and > 0");
  }
  if (profile.control_effectiveness == 0.0) {
    raise(ErrorCode::zero_control_effectiveness,
          "control_effectiveness is zero; residual risk is undefined");
  }
  if (!std::isfinite(profile.control_effectiveness) || profile.control_effectiveness < 0.0) {
    raise(ErrorCode::validation_error, "control_effectiveness must be finite and > 0");
  }
  return profile.inherent_risk / profile.control_effectiveness;
}

}  // namespace iotmm
