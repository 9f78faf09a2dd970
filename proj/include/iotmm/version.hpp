#pragma once

namespace iotmm {

inline constexpr const char* kEngineVersion = "1.0.0";

// Version of the scenario file schema accepted by load_scenario.
inline constexpr const char* kScenarioSchemaVersion = "1";

// Version of the report documents produced by emit_report.
inline constexpr const char* kReportSchemaVersion = "1";

}  // namespace iotmm
