#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "iotmm/errors.hpp"
#include "iotmm/format.hpp"
#include "iotmm/inventory.hpp"

namespace iotmm {

// Ratio of vulnerable devices to the connected population, carried both as a
// plain ratio and as a per-million micromort rate.
struct IotmmResult {
  std::string label;
  double ratio = 0.0;       // vulnerable_count / total_count
  double micromorts = 0.0;  // ratio * 1e6

  bool operator==(const IotmmResult&) const = default;
};

inline IotmmResult iot_micromort(const MicroMortObservation& obs) {
  if (obs.total_count == 0) {
    raise(ErrorCode::zero_population,
          "observation '" + obs.label + "': total_count must be positive");
  }
  if (obs.vulnerable_count > obs.total_count) {
    raise(ErrorCode::count_exceeds_population,
          "observation '" + obs.label + "': vulnerable_count " +
              std::to_string(obs.vulnerable_count) + " exceeds total_count " +
              std::to_string(obs.total_count));
  }
  const double ratio =
      static_cast<double>(obs.vulnerable_count) / static_cast<double>(obs.total_count);
  return {obs.label, ratio, ratio * 1e6};
}

// Willingness-to-pay aggregation over a population of things.
struct WtpAssessment {
  Money per_unit_wtp = 0.0;
  std::uint64_t population = 0;
  Probability risk_reduction = 0.0;  // individual risk reduction bought per unit
  Money aggregate = 0.0;             // per_unit_wtp * population
  double expected_reductions = 0.0;  // statistical losses avoided: population * risk_reduction

  bool operator==(const WtpAssessment&) const = default;
};

// Market value of one micromort of risk reduction: security spending spread
// over the connected device population.
inline Money market_value_per_micromort(Money security_spending, std::uint64_t device_count) {
  if (!std::isfinite(security_spending) || security_spending < 0.0) {
    raise(ErrorCode::validation_error, "security_spending must be a finite amount >= 0");
  }
  if (device_count == 0) {
    raise(ErrorCode::zero_population, "device_count must be positive");
  }
  return security_spending / static_cast<double>(device_count);
}

inline WtpAssessment aggregate_willingness_to_pay(Money per_unit_wtp, std::uint64_t population,
                                                  Probability risk_reduction) {
  if (!std::isfinite(per_unit_wtp) || per_unit_wtp < 0.0) {
    raise(ErrorCode::validation_error, "per_unit_wtp must be a finite amount >= 0");
  }
  if (population == 0) {
    raise(ErrorCode::zero_population, "population must be positive");
  }
  if (!std::isfinite(risk_reduction) || risk_reduction <= 0.0 || risk_reduction > 1.0) {
    raise(ErrorCode::validation_error, "risk_reduction must lie in (0, 1]");
  }
  WtpAssessment out;
  out.per_unit_wtp = per_unit_wtp;
  out.population = population;
  out.risk_reduction = risk_reduction;
  out.aggregate = per_unit_wtp * static_cast<double>(population);
  out.expected_reductions = static_cast<double>(population) * risk_reduction;
  return out;
}

// Linear price of a stated risk reduction against a 12-month loss limit.
// Micromort-sized risks sit on the locally linear part of the utility curve,
// so the price of reducing risk by reduction_percent is that share of the
// loss limit.
inline Money micromort_reduction_value(Money loss_limit, double reduction_percent) {
  if (!std::isfinite(loss_limit) || loss_limit < 0.0) {
    raise(ErrorCode::validation_error, "loss_limit must be a finite amount >= 0");
  }
  if (!std::isfinite(reduction_percent) || reduction_percent <= 0.0 || reduction_percent > 1.0) {
    raise(ErrorCode::validation_error, "reduction_percent must lie in (0, 1]");
  }
  return loss_limit * reduction_percent;
}

}  // namespace iotmm
