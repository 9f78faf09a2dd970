#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "iotmm/errors.hpp"
#include "iotmm/inventory.hpp"
#include "iotmm/var_engine.hpp"
#include "iotmm/version.hpp"
#include "iotmm/vertex_probability.hpp"

namespace iotmm {

struct ScenarioObservation {
  MicroMortObservation observation;
  std::string provenance_note;

  bool operator==(const ScenarioObservation&) const = default;
};

struct NamedProbabilityCase {
  std::string name;
  VertexProbabilityCase probability_case;
  std::string provenance_note;

  bool operator==(const NamedProbabilityCase&) const = default;
};

struct WtpInputs {
  Money per_unit_wtp = 0.0;
  std::uint64_t population = 0;
  Probability risk_reduction = 0.0;
  std::string provenance_note;

  bool operator==(const WtpInputs&) const = default;
};

struct MarketValueInputs {
  Money security_spending = 0.0;
  std::uint64_t device_count = 0;
  std::string provenance_note;

  bool operator==(const MarketValueInputs&) const = default;
};

// One self-contained assessment: the case-study inputs plus whatever optional
// sections the author wants evaluated. The JSON schema is versioned and
// documented in the README.
struct Scenario {
  std::string schema_version = kScenarioSchemaVersion;
  std::string label;
  std::string currency = "USD";
  std::string provenance_note;
  std::vector<ScenarioObservation> observations;
  std::vector<NamedProbabilityCase> probability_cases;
  std::vector<Thing> things;
  std::optional<VarConfig> var_config;
  std::optional<std::vector<Money>> historical_losses;
  std::optional<WtpInputs> wtp_inputs;
  std::optional<MarketValueInputs> market_value_inputs;
  std::optional<std::vector<double>> confidence_grid;

  bool operator==(const Scenario&) const = default;
};

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void bad_field(const std::string& path, const std::string& why) {
  raise(ErrorCode::validation_error, path + ": " + why);
}

inline const json& member(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) bad_field(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad_field(path + "." + key, "missing required field");
  return *it;
}

inline const json* optional_member(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) bad_field(path, "expected an object");
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

inline std::string string_field(const json& j, const std::string& path) {
  if (!j.is_string()) bad_field(path, "expected a string");
  return j.get<std::string>();
}

inline double number_field(const json& j, const std::string& path) {
  if (!j.is_number()) bad_field(path, "expected a number");
  return j.get<double>();
}

inline std::uint64_t count_field(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  bad_field(path, "expected a non-negative integer");
}

inline std::string optional_string(const json& obj, const std::string& path, const char* key) {
  const json* j = optional_member(obj, path, key);
  return j ? string_field(*j, path + "." + key) : std::string{};
}

template <typename T>
T enum_field(const json& j, const std::string& path,
             std::initializer_list<std::pair<const char*, T>> values) {
  const std::string text = string_field(j, path);
  for (const auto& [name, value] : values) {
    if (text == name) return value;
  }
  std::string expected;
  for (const auto& [name, value] : values) {
    if (!expected.empty()) expected += ", ";
    expected += name;
  }
  bad_field(path, "unknown value '" + text + "' (expected one of: " + expected + ")");
}

inline DigitalAsset parse_asset(const json& j, const std::string& path) {
  DigitalAsset asset;
  asset.id = string_field(member(j, path, "id"), path + ".id");
  asset.name = optional_string(j, path, "name");
  asset.value_role = enum_field<ValueRole>(member(j, path, "value_role"), path + ".value_role",
                                           {{"core", ValueRole::core},
                                            {"operational", ValueRole::operational}});
  asset.origin = enum_field<AssetOrigin>(member(j, path, "origin"), path + ".origin",
                                         {{"digitised", AssetOrigin::digitised},
                                          {"born_digital", AssetOrigin::born_digital}});
  asset.valuation = enum_field<ValuationBasis>(member(j, path, "valuation"), path + ".valuation",
                                               {{"intrinsic", ValuationBasis::intrinsic},
                                                {"market", ValuationBasis::market},
                                                {"subjective", ValuationBasis::subjective}});
  asset.value = number_field(member(j, path, "value"), path + ".value");
  asset.residual_exposure_mm =
      number_field(member(j, path, "residual_exposure_mm"), path + ".residual_exposure_mm");
  if (const json* severity = optional_member(j, path, "severity_fraction")) {
    asset.severity_fraction = number_field(*severity, path + ".severity_fraction");
  }
  return asset;
}

inline Thing parse_thing(const json& j, const std::string& path) {
  Thing thing;
  thing.id = string_field(member(j, path, "id"), path + ".id");
  thing.name = optional_string(j, path, "name");
  const json& factors = member(j, path, "risk_factors");
  const std::string fpath = path + ".risk_factors";
  thing.risk_factors.inherent_risk =
      number_field(member(factors, fpath, "inherent_risk"), fpath + ".inherent_risk");
  thing.risk_factors.control_effectiveness = number_field(
      member(factors, fpath, "control_effectiveness"), fpath + ".control_effectiveness");
  thing.risk_factors.technological = optional_string(factors, fpath, "technological");
  thing.risk_factors.non_technological = optional_string(factors, fpath, "non_technological");
  if (const json* tags = optional_member(j, path, "strategy_tags")) {
    if (!tags->is_array()) bad_field(path + ".strategy_tags", "expected an array");
    for (std::size_t i = 0; i < tags->size(); ++i) {
      thing.strategy_tags.insert(enum_field<StrategyTag>(
          (*tags)[i], path + ".strategy_tags[" + std::to_string(i) + "]",
          {{"identification", StrategyTag::identification},
           {"estimation", StrategyTag::estimation},
           {"prioritisation", StrategyTag::prioritisation}}));
    }
  }
  const json& assets = member(j, path, "assets");
  if (!assets.is_array()) bad_field(path + ".assets", "expected an array");
  for (std::size_t i = 0; i < assets.size(); ++i) {
    thing.assets.push_back(parse_asset(assets[i], path + ".assets[" + std::to_string(i) + "]"));
  }
  return thing;
}

inline VertexProbabilityCase parse_case(const json& j, const std::string& path) {
  VertexProbabilityCase c;
  c.p_tx_given_y = number_field(member(j, path, "p_tx_given_y"), path + ".p_tx_given_y");
  c.p_tx_given_t = number_field(member(j, path, "p_tx_given_t"), path + ".p_tx_given_t");
  if (const json* p = optional_member(j, path, "p_tx")) {
    c.p_tx = number_field(*p, path + ".p_tx");
  }
  if (const json* p = optional_member(j, path, "p_t")) {
    c.p_t = number_field(*p, path + ".p_t");
  }
  if (const json* states = optional_member(j, path, "states")) {
    if (!states->is_object()) bad_field(path + ".states", "expected an object");
    for (auto it = states->begin(); it != states->end(); ++it) {
      const std::string spath = path + ".states[" + it.key() + "]";
      StateProbabilities sp;
      sp.p_joint_given_state =
          number_field(member(*it, spath, "p_joint_given_state"), spath + ".p_joint_given_state");
      sp.p_t_given_state =
          number_field(member(*it, spath, "p_t_given_state"), spath + ".p_t_given_state");
      c.states[it.key()] = sp;
    }
  }
  return c;
}

inline VarConfig parse_var_config(const json& j, const std::string& path) {
  VarConfig config;
  if (const json* horizon = optional_member(j, path, "horizon_months")) {
    const std::uint64_t months = count_field(*horizon, path + ".horizon_months");
    if (months == 0 || months > 1200) bad_field(path + ".horizon_months", "must be in [1, 1200]");
    config.horizon_months = static_cast<std::uint32_t>(months);
  }
  if (const json* confidence = optional_member(j, path, "confidence")) {
    config.confidence = number_field(*confidence, path + ".confidence");
  }
  config.paths = count_field(member(j, path, "paths"), path + ".paths");
  config.seed = count_field(member(j, path, "seed"), path + ".seed");
  return config;
}

}  // namespace detail

// Semantic invariants over an already-parsed scenario. Violations carry field
// paths; the list is empty iff the scenario is runnable.
inline std::vector<std::string> validate_scenario(const Scenario& scenario) {
  std::vector<std::string> violations;
  auto append = [&](const std::string& where, const std::vector<std::string>& found) {
    for (const auto& v : found) violations.push_back(where + ": " + v);
  };

  if (scenario.schema_version != kScenarioSchemaVersion) {
    violations.push_back("schema_version: unrecognized version '" + scenario.schema_version +
                         "' (this engine reads version " + kScenarioSchemaVersion + ")");
  }
  if (scenario.label.empty()) violations.push_back("label: must not be empty");

  std::set<std::string> labels;
  for (std::size_t i = 0; i < scenario.observations.size(); ++i) {
    const auto& entry = scenario.observations[i];
    const std::string where = "observations[" + std::to_string(i) + "]";
    if (entry.observation.label.empty()) violations.push_back(where + ": label must not be empty");
    if (!labels.insert(entry.observation.label).second) {
      violations.push_back(where + ": duplicate label '" + entry.observation.label + "'");
    }
    append(where, validate_observation(entry.observation));
  }

  std::set<std::string> case_names;
  for (std::size_t i = 0; i < scenario.probability_cases.size(); ++i) {
    const auto& entry = scenario.probability_cases[i];
    const std::string where = "probability_cases[" + std::to_string(i) + "]";
    if (entry.name.empty()) violations.push_back(where + ": name must not be empty");
    if (!case_names.insert(entry.name).second) {
      violations.push_back(where + ": duplicate name '" + entry.name + "'");
    }
    append(where, validate_case(entry.probability_case));
  }

  std::set<std::string> thing_ids;
  for (std::size_t i = 0; i < scenario.things.size(); ++i) {
    const auto& thing = scenario.things[i];
    const std::string where = "things[" + std::to_string(i) + "]";
    if (thing.id.empty()) violations.push_back(where + ": id must not be empty");
    if (!thing_ids.insert(thing.id).second) {
      violations.push_back(where + ": duplicate id '" + thing.id + "'");
    }
    append(where, validate_inventory(thing));
  }

  if (scenario.var_config) {
    append("var_config", validate_config(*scenario.var_config));
    if (scenario.var_config->paths > 1'000'000'000ull) {
      violations.push_back("var_config.paths: must be at most 1000000000");
    }
  }
  if (scenario.historical_losses) {
    const auto& losses = *scenario.historical_losses;
    if (losses.empty()) violations.push_back("historical_losses: must not be empty when present");
    for (std::size_t i = 0; i < losses.size(); ++i) {
      if (!std::isfinite(losses[i]) || losses[i] < 0.0) {
        violations.push_back("historical_losses[" + std::to_string(i) +
                             "]: must be a finite amount >= 0");
      }
    }
  }
  if (scenario.wtp_inputs) {
    const auto& wtp = *scenario.wtp_inputs;
    if (!std::isfinite(wtp.per_unit_wtp) || wtp.per_unit_wtp < 0.0) {
      violations.push_back("wtp_inputs.per_unit_wtp: must be a finite amount >= 0");
    }
    if (wtp.population == 0) violations.push_back("wtp_inputs.population: must be positive");
    if (!std::isfinite(wtp.risk_reduction) || wtp.risk_reduction <= 0.0 ||
        wtp.risk_reduction > 1.0) {
      violations.push_back("wtp_inputs.risk_reduction: must lie in (0, 1]");
    }
  }
  if (scenario.market_value_inputs) {
    const auto& mv = *scenario.market_value_inputs;
    if (!std::isfinite(mv.security_spending) || mv.security_spending < 0.0) {
      violations.push_back("market_value_inputs.security_spending: must be a finite amount >= 0");
    }
    if (mv.device_count == 0) {
      violations.push_back("market_value_inputs.device_count: must be positive");
    }
  }
  if (scenario.confidence_grid) {
    const auto& grid = *scenario.confidence_grid;
    if (grid.empty()) violations.push_back("confidence_grid: must not be empty when present");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!std::isfinite(grid[i]) || grid[i] <= 0.0 || grid[i] >= 1.0) {
        violations.push_back("confidence_grid[" + std::to_string(i) +
                             "]: must lie in (0, 1) exclusive");
      }
    }
  }
  return violations;
}

// Builds a Scenario from parsed JSON, then checks every invariant. Structural
// problems (wrong types, missing fields) and invariant breaches both raise
// ValidationError with the offending field path.
inline Scenario scenario_from_json(const nlohmann::json& j) {
  using detail::member, detail::optional_member, detail::string_field, detail::number_field,
      detail::count_field, detail::optional_string;
  const std::string root = "scenario";
  Scenario scenario;
  scenario.schema_version = string_field(member(j, root, "schema_version"), "schema_version");
  scenario.label = string_field(member(j, root, "label"), "label");
  if (const nlohmann::json* currency = optional_member(j, root, "currency")) {
    scenario.currency = string_field(*currency, "currency");
  }
  scenario.provenance_note = optional_string(j, root, "provenance_note");

  if (const nlohmann::json* observations = optional_member(j, root, "observations")) {
    if (!observations->is_array()) detail::bad_field("observations", "expected an array");
    for (std::size_t i = 0; i < observations->size(); ++i) {
      const std::string path = "observations[" + std::to_string(i) + "]";
      const nlohmann::json& entry = (*observations)[i];
      ScenarioObservation obs;
      obs.observation.label = string_field(member(entry, path, "label"), path + ".label");
      obs.observation.vulnerable_count =
          count_field(member(entry, path, "vulnerable_count"), path + ".vulnerable_count");
      obs.observation.total_count =
          count_field(member(entry, path, "total_count"), path + ".total_count");
      obs.provenance_note = optional_string(entry, path, "provenance_note");
      scenario.observations.push_back(std::move(obs));
    }
  }

  if (const nlohmann::json* cases = optional_member(j, root, "probability_cases")) {
    if (!cases->is_array()) detail::bad_field("probability_cases", "expected an array");
    for (std::size_t i = 0; i < cases->size(); ++i) {
      const std::string path = "probability_cases[" + std::to_string(i) + "]";
      const nlohmann::json& entry = (*cases)[i];
      NamedProbabilityCase named;
      named.name = string_field(member(entry, path, "name"), path + ".name");
      named.probability_case = detail::parse_case(entry, path);
      named.provenance_note = optional_string(entry, path, "provenance_note");
      scenario.probability_cases.push_back(std::move(named));
    }
  }

  if (const nlohmann::json* things = optional_member(j, root, "things")) {
    if (!things->is_array()) detail::bad_field("things", "expected an array");
    for (std::size_t i = 0; i < things->size(); ++i) {
      scenario.things.push_back(
          detail::parse_thing((*things)[i], "things[" + std::to_string(i) + "]"));
    }
  }

  if (const nlohmann::json* config = optional_member(j, root, "var_config")) {
    scenario.var_config = detail::parse_var_config(*config, "var_config");
  }
  if (const nlohmann::json* losses = optional_member(j, root, "historical_losses")) {
    if (!losses->is_array()) detail::bad_field("historical_losses", "expected an array");
    std::vector<Money> values;
    for (std::size_t i = 0; i < losses->size(); ++i) {
      values.push_back(
          number_field((*losses)[i], "historical_losses[" + std::to_string(i) + "]"));
    }
    scenario.historical_losses = std::move(values);
  }
  if (const nlohmann::json* wtp = optional_member(j, root, "wtp_inputs")) {
    const std::string path = "wtp_inputs";
    WtpInputs inputs;
    inputs.per_unit_wtp = number_field(member(*wtp, path, "per_unit_wtp"), path + ".per_unit_wtp");
    inputs.population = count_field(member(*wtp, path, "population"), path + ".population");
    inputs.risk_reduction =
        number_field(member(*wtp, path, "risk_reduction"), path + ".risk_reduction");
    inputs.provenance_note = optional_string(*wtp, path, "provenance_note");
    scenario.wtp_inputs = std::move(inputs);
  }
  if (const nlohmann::json* mv = optional_member(j, root, "market_value_inputs")) {
    const std::string path = "market_value_inputs";
    MarketValueInputs inputs;
    inputs.security_spending =
        number_field(member(*mv, path, "security_spending"), path + ".security_spending");
    inputs.device_count = count_field(member(*mv, path, "device_count"), path + ".device_count");
    inputs.provenance_note = optional_string(*mv, path, "provenance_note");
    scenario.market_value_inputs = std::move(inputs);
  }
  if (const nlohmann::json* grid = optional_member(j, root, "confidence_grid")) {
    if (!grid->is_array()) detail::bad_field("confidence_grid", "expected an array");
    std::vector<double> values;
    for (std::size_t i = 0; i < grid->size(); ++i) {
      values.push_back(number_field((*grid)[i], "confidence_grid[" + std::to_string(i) + "]"));
    }
    scenario.confidence_grid = std::move(values);
  }

  if (auto violations = validate_scenario(scenario); !violations.empty()) {
    std::string joined;
    for (const auto& v : violations) {
      if (!joined.empty()) joined += "; ";
      joined += v;
    }
    raise(ErrorCode::validation_error, joined);
  }
  return scenario;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) {
    raise(ErrorCode::io_error, "cannot open scenario file: " + path.string());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(stream);
  } catch (const nlohmann::json::parse_error& e) {
    raise(ErrorCode::parse_error, path.string() + ": " + e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const Error& e) {
    raise(e.code(), path.string() + ": " + e.what());
  }
}

// Canonical JSON form of a scenario; load(emit(s)) == s for every valid s.
inline nlohmann::json to_json(const Scenario& scenario) {
  nlohmann::json j;
  j["schema_version"] = scenario.schema_version;
  j["label"] = scenario.label;
  j["currency"] = scenario.currency;
  if (!scenario.provenance_note.empty()) j["provenance_note"] = scenario.provenance_note;

  if (!scenario.observations.empty()) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& entry : scenario.observations) {
      nlohmann::json o;
      o["label"] = entry.observation.label;
      o["vulnerable_count"] = entry.observation.vulnerable_count;
      o["total_count"] = entry.observation.total_count;
      if (!entry.provenance_note.empty()) o["provenance_note"] = entry.provenance_note;
      list.push_back(std::move(o));
    }
    j["observations"] = std::move(list);
  }
  if (!scenario.probability_cases.empty()) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& entry : scenario.probability_cases) {
      nlohmann::json c;
      c["name"] = entry.name;
      c["p_tx_given_y"] = entry.probability_case.p_tx_given_y;
      c["p_tx_given_t"] = entry.probability_case.p_tx_given_t;
      if (entry.probability_case.p_tx) c["p_tx"] = *entry.probability_case.p_tx;
      if (entry.probability_case.p_t) c["p_t"] = *entry.probability_case.p_t;
      if (!entry.probability_case.states.empty()) {
        nlohmann::json states;
        for (const auto& [label, sp] : entry.probability_case.states) {
          states[label] = {{"p_joint_given_state", sp.p_joint_given_state},
                           {"p_t_given_state", sp.p_t_given_state}};
        }
        c["states"] = std::move(states);
      }
      if (!entry.provenance_note.empty()) c["provenance_note"] = entry.provenance_note;
      list.push_back(std::move(c));
    }
    j["probability_cases"] = std::move(list);
  }
  if (!scenario.things.empty()) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& thing : scenario.things) {
      nlohmann::json t;
      t["id"] = thing.id;
      if (!thing.name.empty()) t["name"] = thing.name;
      nlohmann::json factors;
      factors["inherent_risk"] = thing.risk_factors.inherent_risk;
      factors["control_effectiveness"] = thing.risk_factors.control_effectiveness;
      if (!thing.risk_factors.technological.empty()) {
        factors["technological"] = thing.risk_factors.technological;
      }
      if (!thing.risk_factors.non_technological.empty()) {
        factors["non_technological"] = thing.risk_factors.non_technological;
      }
      t["risk_factors"] = std::move(factors);
      if (!thing.strategy_tags.empty()) {
        nlohmann::json tags = nlohmann::json::array();
        for (StrategyTag tag : thing.strategy_tags) {
          switch (tag) {
            case StrategyTag::identification: tags.push_back("identification"); break;
            case StrategyTag::estimation: tags.push_back("estimation"); break;
            case StrategyTag::prioritisation: tags.push_back("prioritisation"); break;
          }
        }
        t["strategy_tags"] = std::move(tags);
      }
      nlohmann::json assets = nlohmann::json::array();
      for (const auto& asset : thing.assets) {
        nlohmann::json a;
        a["id"] = asset.id;
        if (!asset.name.empty()) a["name"] = asset.name;
        a["value_role"] = asset.value_role == ValueRole::core ? "core" : "operational";
        a["origin"] = asset.origin == AssetOrigin::digitised ? "digitised" : "born_digital";
        switch (asset.valuation) {
          case ValuationBasis::intrinsic: a["valuation"] = "intrinsic"; break;
          case ValuationBasis::market: a["valuation"] = "market"; break;
          case ValuationBasis::subjective: a["valuation"] = "subjective"; break;
        }
        a["value"] = asset.value;
        a["residual_exposure_mm"] = asset.residual_exposure_mm;
        a["severity_fraction"] = asset.severity_fraction;
        assets.push_back(std::move(a));
      }
      t["assets"] = std::move(assets);
      list.push_back(std::move(t));
    }
    j["things"] = std::move(list);
  }
  if (scenario.var_config) {
    j["var_config"] = {{"horizon_months", scenario.var_config->horizon_months},
                       {"confidence", scenario.var_config->confidence},
                       {"paths", scenario.var_config->paths},
                       {"seed", scenario.var_config->seed}};
  }
  if (scenario.historical_losses) j["historical_losses"] = *scenario.historical_losses;
  if (scenario.wtp_inputs) {
    nlohmann::json w;
    w["per_unit_wtp"] = scenario.wtp_inputs->per_unit_wtp;
    w["population"] = scenario.wtp_inputs->population;
    w["risk_reduction"] = scenario.wtp_inputs->risk_reduction;
    if (!scenario.wtp_inputs->provenance_note.empty()) {
      w["provenance_note"] = scenario.wtp_inputs->provenance_note;
    }
    j["wtp_inputs"] = std::move(w);
  }
  if (scenario.market_value_inputs) {
    nlohmann::json m;
    m["security_spending"] = scenario.market_value_inputs->security_spending;
    m["device_count"] = scenario.market_value_inputs->device_count;
    if (!scenario.market_value_inputs->provenance_note.empty()) {
      m["provenance_note"] = scenario.market_value_inputs->provenance_note;
    }
    j["market_value_inputs"] = std::move(m);
  }
  if (scenario.confidence_grid) j["confidence_grid"] = *scenario.confidence_grid;
  return j;
}

}  // namespace iotmm
