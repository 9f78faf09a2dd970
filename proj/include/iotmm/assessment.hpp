#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "iotmm/errors.hpp"
#include "iotmm/format.hpp"
#include "iotmm/micromort.hpp"
#include "iotmm/scenario.hpp"
#include "iotmm/valuation.hpp"
#include "iotmm/var_engine.hpp"
#include "iotmm/vertex_probability.hpp"
#include "iotmm/version.hpp"

namespace iotmm {

struct ObservationResult {
  MicroMortObservation observation;
  IotmmResult result;
  std::string provenance_note;
};

struct CaseResult {
  std::string name;
  CaseEvaluation evaluation;
  std::string provenance_note;
};

struct VarCurvePoint {
  double confidence = 0.0;
  Money var = 0.0;
};

struct ThingResult {
  std::string id;
  std::string name;
  std::set<StrategyTag> strategy_tags;
  CompositionReport composition;
  Money total_digital_value = 0.0;
  double residual_risk = 0.0;
  Money point_var = 0.0;
  std::optional<LossDistributionSummary> monte_carlo;
  std::vector<VarCurvePoint> var_curve;           // confidence_grid quantiles
  std::optional<Money> loss_limit_12m;            // 12-month VaR
  std::optional<Money> reduction_value_1pct;      // price of a 1% risk reduction
};

struct HistoricalResult {
  std::size_t record_count = 0;
  double confidence = 0.0;
  Money var = 0.0;
  std::vector<VarCurvePoint> curve;
};

struct WtpResult {
  WtpAssessment assessment;
  std::string provenance_note;
};

struct MarketValueResult {
  Money security_spending = 0.0;
  std::uint64_t device_count = 0;
  Money value_per_device = 0.0;
  std::string provenance_note;
};

// Command-line overrides applied on top of a scenario's var_config. They are
// echoed in the report's provenance block so every printed number can be
// reproduced from the report alone.
struct RunOverrides {
  std::optional<std::uint64_t> paths;
  std::optional<std::uint64_t> seed;
  std::optional<double> confidence;
  unsigned workers = 0;  // 0 = hardware concurrency; never affects results

  bool any() const { return paths || seed || confidence; }
};

struct AssessmentReport {
  std::string engine_version = kEngineVersion;
  std::string report_schema_version = kReportSchemaVersion;
  std::string scenario_label;
  std::string scenario_schema_version;
  std::string currency;
  std::string scenario_note;
  std::optional<VarConfig> var_config;  // effective config after overrides
  RunOverrides overrides;
  std::vector<ObservationResult> observations;
  std::vector<CaseResult> probability_cases;
  std::vector<ThingResult> things;
  std::optional<HistoricalResult> historical;
  std::optional<WtpResult> wtp;
  std::optional<MarketValueResult> market_value;
};

enum class ReportFormat { json, csv };

inline ReportFormat report_format_from_string(const std::string& text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  raise(ErrorCode::unsupported_format,
        "unsupported report format '" + text + "' (expected json or csv)");
}

namespace detail {

[[noreturn]] inline void rethrow_at(const Error& e, const std::string& element) {
  raise(e.code(), element + ": " + e.what());
}

}  // namespace detail

// Evaluates every section of a scenario. Pure function of (scenario,
// overrides): no ambient state, clock, or locale enters the result, and the
// Monte Carlo sections are fixed by the seed.
inline AssessmentReport run_scenario(const Scenario& scenario, const RunOverrides& overrides = {}) {
  if (auto violations = validate_scenario(scenario); !violations.empty()) {
    std::string joined;
    for (const auto& v : violations) {
      if (!joined.empty()) joined += "; ";
      joined += v;
    }
    raise(ErrorCode::validation_error, joined);
  }

  AssessmentReport report;
  report.scenario_label = scenario.label;
  report.scenario_schema_version = scenario.schema_version;
  report.currency = scenario.currency;
  report.scenario_note = scenario.provenance_note;
  report.overrides = overrides;

  std::optional<VarConfig> config = scenario.var_config;
  if (overrides.any()) {
    if (!config) {
      if (!overrides.paths || !overrides.seed) {
        raise(ErrorCode::validation_error,
              "scenario has no var_config; overrides must supply both paths and seed");
      }
      config = VarConfig{};
    }
    if (overrides.paths) config->paths = *overrides.paths;
    if (overrides.seed) config->seed = *overrides.seed;
    if (overrides.confidence) config->confidence = *overrides.confidence;
    if (auto violations = validate_config(*config); !violations.empty()) {
      std::string joined;
      for (const auto& v : violations) {
        if (!joined.empty()) joined += "; ";
        joined += v;
      }
      raise(ErrorCode::validation_error, "var_config after overrides: " + joined);
    }
  }
  report.var_config = config;

  for (const auto& entry : scenario.observations) {
    try {
      report.observations.push_back(
          {entry.observation, iot_micromort(entry.observation), entry.provenance_note});
    } catch (const Error& e) {
      detail::rethrow_at(e, "observations['" + entry.observation.label + "']");
    }
  }

  for (const auto& entry : scenario.probability_cases) {
    try {
      report.probability_cases.push_back(
          {entry.name, evaluate_case(entry.probability_case), entry.provenance_note});
    } catch (const Error& e) {
      detail::rethrow_at(e, "probability_cases['" + entry.name + "']");
    }
  }

  for (const auto& thing : scenario.things) {
    try {
      ThingResult result;
      result.id = thing.id;
      result.name = thing.name;
      result.strategy_tags = thing.strategy_tags;
      result.composition = composition(thing);
      result.total_digital_value = total_digital_value(thing);
      result.residual_risk = residual_risk(thing.risk_factors);
      result.point_var = point_var(thing);
      if (config) {
        const auto losses = simulate_losses(thing, *config, overrides.workers);
        result.monte_carlo = summarize_losses(losses, *config);
        if (scenario.confidence_grid) {
          std::vector<double> sorted = losses;
          std::sort(sorted.begin(), sorted.end());
          for (double level : *scenario.confidence_grid) {
            result.var_curve.push_back({level, nearest_rank_quantile(sorted, level)});
          }
        }
        if (config->horizon_months == 12) {
          result.loss_limit_12m = result.monte_carlo->var_at_confidence;
        } else {
          result.loss_limit_12m = loss_limit_12m(thing, *config, overrides.workers);
        }
        result.reduction_value_1pct = micromort_reduction_value(*result.loss_limit_12m, 0.01);
      }
      report.things.push_back(std::move(result));
    } catch (const Error& e) {
      detail::rethrow_at(e, "things['" + thing.id + "']");
    }
  }

  if (scenario.historical_losses) {
    try {
      HistoricalResult historical;
      historical.record_count = scenario.historical_losses->size();
      historical.confidence = config ? config->confidence : 0.95;
      historical.var = historical_var(*scenario.historical_losses, historical.confidence);
      if (scenario.confidence_grid) {
        for (double level : *scenario.confidence_grid) {
          historical.curve.push_back(
              {level, historical_var(*scenario.historical_losses, level)});
        }
      }
      report.historical = std::move(historical);
    } catch (const Error& e) {
      detail::rethrow_at(e, "historical_losses");
    }
  }

  if (scenario.wtp_inputs) {
    try {
      report.wtp = {aggregate_willingness_to_pay(scenario.wtp_inputs->per_unit_wtp,
                                                 scenario.wtp_inputs->population,
                                                 scenario.wtp_inputs->risk_reduction),
                    scenario.wtp_inputs->provenance_note};
    } catch (const Error& e) {
      detail::rethrow_at(e, "wtp_inputs");
    }
  }

  if (scenario.market_value_inputs) {
    try {
      MarketValueResult mv;
      mv.security_spending = scenario.market_value_inputs->security_spending;
      mv.device_count = scenario.market_value_inputs->device_count;
      mv.value_per_device =
          market_value_per_micromort(mv.security_spending, mv.device_count);
      mv.provenance_note = scenario.market_value_inputs->provenance_note;
      report.market_value = std::move(mv);
    } catch (const Error& e) {
      detail::rethrow_at(e, "market_value_inputs");
    }
  }

  return report;
}

namespace detail {

inline const char* derivation_name(Derivation d) {
  return d == Derivation::input ? "input" : "derived";
}

inline nlohmann::json quantity_json(const EvaluatedQuantity& q) {
  return {{"value", q.value},
          {"display", display_generic(q.value)},
          {"provenance", derivation_name(q.derivation)}};
}

inline std::string strategy_tag_name(StrategyTag tag) {
  switch (tag) {
    case StrategyTag::identification: return "identification";
    case StrategyTag::estimation: return "estimation";
    case StrategyTag::prioritisation: return "prioritisation";
  }
  return "unknown";
}

inline nlohmann::json report_to_json(const AssessmentReport& report) {
  nlohmann::json j;
  j["engine_version"] = report.engine_version;
  j["report_schema_version"] = report.report_schema_version;
  nlohmann::json scenario;
  scenario["label"] = report.scenario_label;
  scenario["schema_version"] = report.scenario_schema_version;
  scenario["currency"] = report.currency;
  if (!report.scenario_note.empty()) scenario["provenance_note"] = report.scenario_note;
  j["scenario"] = std::move(scenario);

  if (report.var_config) {
    nlohmann::json config;
    config["horizon_months"] = report.var_config->horizon_months;
    config["confidence"] = report.var_config->confidence;
    config["paths"] = report.var_config->paths;
    config["seed"] = report.var_config->seed;
    config["quantile_convention"] = "nearest-rank";
    j["var_config"] = std::move(config);
  }
  if (report.overrides.any()) {
    nlohmann::json overrides;
    if (report.overrides.paths) overrides["paths"] = *report.overrides.paths;
    if (report.overrides.seed) overrides["seed"] = *report.overrides.seed;
    if (report.overrides.confidence) overrides["confidence"] = *report.overrides.confidence;
    j["provenance"] = {{"overrides", std::move(overrides)}};
  }

  nlohmann::json observations = nlohmann::json::array();
  for (const auto& entry : report.observations) {
    nlohmann::json o;
    o["label"] = entry.observation.label;
    o["vulnerable_count"] = entry.observation.vulnerable_count;
    o["total_count"] = entry.observation.total_count;
    o["ratio"] = entry.result.ratio;
    o["ratio_display"] = display_ratio(entry.result.ratio);
    o["micromorts"] = entry.result.micromorts;
    o["micromorts_display"] = display_generic(entry.result.micromorts);
    if (!entry.provenance_note.empty()) o["provenance_note"] = entry.provenance_note;
    observations.push_back(std::move(o));
  }
  j["observations"] = std::move(observations);

  nlohmann::json cases = nlohmann::json::array();
  for (const auto& entry : report.probability_cases) {
    nlohmann::json c;
    c["name"] = entry.name;
    c["p_tx_given_y"] = quantity_json(entry.evaluation.p_tx_given_y);
    c["p_tx_given_t"] = quantity_json(entry.evaluation.p_tx_given_t);
    c["p_tx"] = quantity_json(entry.evaluation.p_tx);
    c["p_t"] = quantity_json(entry.evaluation.p_t);
    c["p_y"] = quantity_json(entry.evaluation.p_y);
    c["consistency_checked"] = entry.evaluation.consistency_checked;
    if (!entry.evaluation.states.empty()) {
      nlohmann::json states;
      for (const auto& [label, state] : entry.evaluation.states) {
        states[label] = {{"p_joint_given_state", state.p_joint_given_state},
                         {"p_t_given_state", state.p_t_given_state},
                         {"p_tx_given_t_and_state", state.p_tx_given_t_and_state},
                         {"p_tx_given_t_and_state_display",
                          display_generic(state.p_tx_given_t_and_state)}};
      }
      c["states"] = std::move(states);
    }
    if (!entry.provenance_note.empty()) c["provenance_note"] = entry.provenance_note;
    cases.push_back(std::move(c));
  }
  j["probability_cases"] = std::move(cases);

  nlohmann::json things = nlohmann::json::array();
  for (const auto& entry : report.things) {
    nlohmann::json t;
    t["id"] = entry.id;
    if (!entry.name.empty()) t["name"] = entry.name;
    if (!entry.strategy_tags.empty()) {
      nlohmann::json tags = nlohmann::json::array();
      for (StrategyTag tag : entry.strategy_tags) tags.push_back(strategy_tag_name(tag));
      t["strategy_tags"] = std::move(tags);
    }
    nlohmann::json comp;
    comp["core_count"] = entry.composition.core_count;
    comp["operational_count"] = entry.composition.operational_count;
    comp["core_value_sum"] = entry.composition.core_value_sum;
    comp["operational_value_sum"] = entry.composition.operational_value_sum;
    comp["core_to_operational_ratio"] =
        entry.composition.core_to_operational_ratio
            ? nlohmann::json(*entry.composition.core_to_operational_ratio)
            : nlohmann::json(nullptr);
    comp["digitised_count"] = entry.composition.digitised_count;
    comp["born_digital_count"] = entry.composition.born_digital_count;
    comp["digitised_value_sum"] = entry.composition.digitised_value_sum;
    comp["born_digital_value_sum"] = entry.composition.born_digital_value_sum;
    comp["digitised_to_born_digital_ratio"] =
        entry.composition.digitised_to_born_digital_ratio
            ? nlohmann::json(*entry.composition.digitised_to_born_digital_ratio)
            : nlohmann::json(nullptr);
    t["composition"] = std::move(comp);
    t["total_digital_value"] = entry.total_digital_value;
    t["total_digital_value_display"] = display_money(entry.total_digital_value);
    t["residual_risk"] = entry.residual_risk;
    t["residual_risk_display"] = display_generic(entry.residual_risk);
    t["point_var"] = entry.point_var;
    t["point_var_display"] = display_money(entry.point_var);
    if (entry.monte_carlo) {
      const auto& mc = *entry.monte_carlo;
      nlohmann::json m;
      m["var_at_confidence"] = mc.var_at_confidence;
      m["var_at_confidence_display"] = display_money(mc.var_at_confidence);
      m["mean_loss"] = mc.mean_loss;
      m["mean_loss_display"] = display_money(mc.mean_loss);
      m["max_loss"] = mc.max_loss;
      m["path_count"] = mc.path_count;
      m["seed"] = mc.seed;
      m["standard_error_estimate"] = mc.standard_error_estimate;
      t["monte_carlo"] = std::move(m);
    }
    if (!entry.var_curve.empty()) {
      nlohmann::json curve = nlohmann::json::array();
      for (const auto& point : entry.var_curve) {
        curve.push_back({{"confidence", point.confidence},
                         {"var", point.var},
                         {"var_display", display_money(point.var)}});
      }
      t["var_curve"] = std::move(curve);
    }
    if (entry.loss_limit_12m) {
      t["loss_limit_12m"] = *entry.loss_limit_12m;
      t["loss_limit_12m_display"] = display_money(*entry.loss_limit_12m);
    }
    if (entry.reduction_value_1pct) {
      t["reduction_value_1pct"] = *entry.reduction_value_1pct;
      t["reduction_value_1pct_display"] = display_money(*entry.reduction_value_1pct);
    }
    things.push_back(std::move(t));
  }
  j["things"] = std::move(things);

  if (report.historical) {
    nlohmann::json h;
    h["record_count"] = report.historical->record_count;
    h["confidence"] = report.historical->confidence;
    h["var"] = report.historical->var;
    h["var_display"] = display_money(report.historical->var);
    if (!report.historical->curve.empty()) {
      nlohmann::json curve = nlohmann::json::array();
      for (const auto& point : report.historical->curve) {
        curve.push_back({{"confidence", point.confidence},
                         {"var", point.var},
                         {"var_display", display_money(point.var)}});
      }
      h["curve"] = std::move(curve);
    }
    j["historical"] = std::move(h);
  }
  if (report.wtp) {
    nlohmann::json w;
    w["per_unit_wtp"] = report.wtp->assessment.per_unit_wtp;
    w["per_unit_wtp_display"] = display_money(report.wtp->assessment.per_unit_wtp);
    w["population"] = report.wtp->assessment.population;
    w["risk_reduction"] = report.wtp->assessment.risk_reduction;
    w["aggregate"] = report.wtp->assessment.aggregate;
    w["aggregate_display"] = display_money(report.wtp->assessment.aggregate);
    w["expected_reductions"] = report.wtp->assessment.expected_reductions;
    if (!report.wtp->provenance_note.empty()) {
      w["provenance_note"] = report.wtp->provenance_note;
    }
    j["wtp"] = std::move(w);
  }
  if (report.market_value) {
    nlohmann::json m;
    m["security_spending"] = report.market_value->security_spending;
    m["device_count"] = report.market_value->device_count;
    m["value_per_device"] = report.market_value->value_per_device;
    m["value_per_device_display"] = display_money(report.market_value->value_per_device);
    if (!report.market_value->provenance_note.empty()) {
      m["provenance_note"] = report.market_value->provenance_note;
    }
    j["market_value"] = std::move(m);
  }
  return j;
}

// CSV report: one row per computed quantity. Inputs echoed by the report are
// not repeated here; the quantity column names what was computed.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& scenario_label) : scenario_(scenario_label) {
    out_ << "scenario,element,quantity,value,display_value,provenance_note\n";
  }

  void row(const std::string& element, const std::string& quantity, const std::string& value,
           const std::string& display, const std::string& note) {
    out_ << csv_escape(scenario_) << ',' << csv_escape(element) << ',' << csv_escape(quantity)
         << ',' << csv_escape(value) << ',' << csv_escape(display) << ',' << csv_escape(note)
         << '\n';
  }

  void number(const std::string& element, const std::string& quantity, double value,
              const std::string& display, const std::string& note = {}) {
    row(element, quantity, format_full(value), display, note);
  }

  std::string str() const { return out_.str(); }

 private:
  std::string scenario_;
  std::ostringstream out_;
};

inline std::string report_to_csv(const AssessmentReport& report) {
  CsvWriter csv(report.scenario_label);

  for (const auto& entry : report.observations) {
    const std::string element = "observation/" + entry.observation.label;
    csv.number(element, "ratio", entry.result.ratio, display_ratio(entry.result.ratio),
               entry.provenance_note);
    csv.number(element, "micromorts", entry.result.micromorts,
               display_generic(entry.result.micromorts), entry.provenance_note);
  }

  for (const auto& entry : report.probability_cases) {
    const std::string element = "probability_case/" + entry.name;
    auto quantity = [&](const char* name, const EvaluatedQuantity& q) {
      csv.number(element, name, q.value, display_generic(q.value),
                 derivation_name(q.derivation));
    };
    quantity("p_tx_given_y", entry.evaluation.p_tx_given_y);
    quantity("p_tx_given_t", entry.evaluation.p_tx_given_t);
    quantity("p_tx", entry.evaluation.p_tx);
    quantity("p_t", entry.evaluation.p_t);
    quantity("p_y", entry.evaluation.p_y);
    for (const auto& [label, state] : entry.evaluation.states) {
      csv.number(element, "states[" + label + "].p_tx_given_t_and_state",
                 state.p_tx_given_t_and_state, display_generic(state.p_tx_given_t_and_state),
                 "derived");
    }
  }

  for (const auto& entry : report.things) {
    const std::string element = "thing/" + entry.id;
    const auto& comp = entry.composition;
    csv.number(element, "composition.core_count", static_cast<double>(comp.core_count),
               std::to_string(comp.core_count));
    csv.number(element, "composition.operational_count",
               static_cast<double>(comp.operational_count),
               std::to_string(comp.operational_count));
    csv.number(element, "composition.core_value_sum", comp.core_value_sum,
               display_money(comp.core_value_sum));
    csv.number(element, "composition.operational_value_sum", comp.operational_value_sum,
               display_money(comp.operational_value_sum));
    if (comp.core_to_operational_ratio) {
      csv.number(element, "composition.core_to_operational_ratio",
                 *comp.core_to_operational_ratio,
                 display_generic(*comp.core_to_operational_ratio));
    } else {
      csv.row(element, "composition.core_to_operational_ratio", "", "undefined", "");
    }
    csv.number(element, "composition.digitised_count", static_cast<double>(comp.digitised_count),
               std::to_string(comp.digitised_count));
    csv.number(element, "composition.born_digital_count",
               static_cast<double>(comp.born_digital_count),
               std::to_string(comp.born_digital_count));
    csv.number(element, "composition.digitised_value_sum", comp.digitised_value_sum,
               display_money(comp.digitised_value_sum));
    csv.number(element, "composition.born_digital_value_sum", comp.born_digital_value_sum,
               display_money(comp.born_digital_value_sum));
    if (comp.digitised_to_born_digital_ratio) {
      csv.number(element, "composition.digitised_to_born_digital_ratio",
                 *comp.digitised_to_born_digital_ratio,
                 display_generic(*comp.digitised_to_born_digital_ratio));
    } else {
      csv.row(element, "composition.digitised_to_born_digital_ratio", "", "undefined", "");
    }
    csv.number(element, "total_digital_value", entry.total_digital_value,
               display_money(entry.total_digital_value));
    csv.number(element, "residual_risk", entry.residual_risk,
               display_generic(entry.residual_risk));
    csv.number(element, "point_var", entry.point_var, display_money(entry.point_var));
    if (entry.monte_carlo) {
      const auto& mc = *entry.monte_carlo;
      csv.number(element, "monte_carlo.var_at_confidence", mc.var_at_confidence,
                 display_money(mc.var_at_confidence));
      csv.number(element, "monte_carlo.mean_loss", mc.mean_loss, display_money(mc.mean_loss));
      csv.number(element, "monte_carlo.max_loss", mc.max_loss, display_money(mc.max_loss));
      csv.number(element, "monte_carlo.path_count", static_cast<double>(mc.path_count),
                 std::to_string(mc.path_count));
      csv.number(element, "monte_carlo.seed", static_cast<double>(mc.seed),
                 std::to_string(mc.seed));
      csv.number(element, "monte_carlo.standard_error_estimate", mc.standard_error_estimate,
                 display_money(mc.standard_error_estimate));
    }
    for (const auto& point : entry.var_curve) {
      csv.number(element, "var_curve[" + format_full(point.confidence) + "]", point.var,
                 display_money(point.var));
    }
    if (entry.loss_limit_12m) {
      csv.number(element, "loss_limit_12m", *entry.loss_limit_12m,
                 display_money(*entry.loss_limit_12m));
    }
    if (entry.reduction_value_1pct) {
      csv.number(element, "reduction_value_1pct", *entry.reduction_value_1pct,
                 display_money(*entry.reduction_value_1pct));
    }
  }

  if (report.historical) {
    const std::string element = "historical";
    csv.number(element, "var[" + format_full(report.historical->confidence) + "]",
               report.historical->var, display_money(report.historical->var));
    for (const auto& point : report.historical->curve) {
      csv.number(element, "var[" + format_full(point.confidence) + "]", point.var,
                 display_money(point.var));
    }
  }
  if (report.wtp) {
    const auto& wtp = report.wtp->assessment;
    csv.number("wtp", "aggregate", wtp.aggregate, display_money(wtp.aggregate),
               report.wtp->provenance_note);
    csv.number("wtp", "expected_reductions", wtp.expected_reductions,
               display_generic(wtp.expected_reductions), report.wtp->provenance_note);
  }
  if (report.market_value) {
    csv.number("market_value", "value_per_device", report.market_value->value_per_device,
               display_money(report.market_value->value_per_device),
               report.market_value->provenance_note);
  }
  return csv.str();
}

}  // namespace detail

// Serializes a report. JSON keys are sorted, numbers carry full precision
// with rounded display strings alongside; both formats are byte-stable for
// identical reports.
inline std::string emit_report(const AssessmentReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::json:
      return detail::report_to_json(report).dump(2) + "\n";
    case ReportFormat::csv:
      return detail::report_to_csv(report);
  }
  raise(ErrorCode::unsupported_format, "unsupported report format");
}

}  // namespace iotmm
