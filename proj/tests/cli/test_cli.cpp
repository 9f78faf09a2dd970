// Drives the built CLI binary end to end: exit codes, stdout contracts and
// stream separation. The binary path arrives via IOTMM_CLI.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string cli_path() {
  const char* env = std::getenv("IOTMM_CLI");
  REQUIRE(env != nullptr);
  return env;
}

std::string scenario_dir() {
  const char* env = std::getenv("IOTMM_SCENARIO_DIR");
  REQUIRE(env != nullptr);
  return env;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

CommandResult run_cli(const std::string& args) {
  const auto out_file = std::filesystem::temp_directory_path() / "iotmm-cli-out.txt";
  const auto err_file = std::filesystem::temp_directory_path() / "iotmm-cli-err.txt";
  const std::string command =
      cli_path() + " " + args + " >" + out_file.string() + " 2>" + err_file.string();
  const int raw = std::system(command.c_str());
  CommandResult result;
  result.exit_code = WEXITSTATUS(raw);
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

}  // namespace

TEST_CASE("micromort prints the 2017 ratio") {
  const auto result = run_cli("micromort --vulnerable 378000000 --total 8400000000");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("ratio=0.045\n") != std::string::npos);
  CHECK(result.out.find("micromorts=45000\n") != std::string::npos);
  CHECK(result.err.empty());
}

TEST_CASE("micromort handles the zero numerator") {
  const auto result = run_cli("micromort --vulnerable 0 --total 10");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("ratio=0\n") != std::string::npos);
}

TEST_CASE("micromort with a zero population exits 2") {
  const auto result = run_cli("micromort --vulnerable 5 --total 0");
  CHECK(result.exit_code == 2);
  CHECK(result.out.empty());
  CHECK(result.err.find("ZeroPopulation") != std::string::npos);
}

TEST_CASE("prob invert reproduces the worked example") {
  const auto result = run_cli("prob invert --ptx 0.6 --ptx-given-y 0.9 --ptx-given-t 0.1");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("P(T)=0.375\n") != std::string::npos);
  CHECK(result.out.find("P(Y)=0.625\n") != std::string::npos);
}

TEST_CASE("prob forward with a zero vertical echoes the vertex conditional") {
  const auto result = run_cli("prob forward --ptx-given-y 0.7 --ptx-given-t 0.2 --pt 0");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("P(Tx)=0.7\n") != std::string::npos);
}

TEST_CASE("prob invert with equal conditionals exits 3") {
  const auto result = run_cli("prob invert --ptx 0.5 --ptx-given-y 0.4 --ptx-given-t 0.4");
  CHECK(result.exit_code == 3);
  CHECK(result.err.find("DegenerateConditionals") != std::string::npos);
}

TEST_CASE("run on a missing scenario exits 2") {
  const auto result = run_cli("run --scenario /nonexistent.json --format json");
  CHECK(result.exit_code == 2);
  CHECK(result.err.find("IoError") != std::string::npos);
}

TEST_CASE("run with an unsupported format exits 2") {
  const auto result =
      run_cli("run --scenario " + scenario_dir() + "/gartner-2017.json --format yaml");
  CHECK(result.exit_code == 2);
  CHECK(result.err.find("UnsupportedFormat") != std::string::npos);
}

TEST_CASE("run emits the vigilante csv row") {
  const auto result =
      run_cli("run --scenario " + scenario_dir() + "/vigilante-2017.json --format csv");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("scenario,element,quantity,value,display_value,provenance_note\n") !=
        std::string::npos);
  CHECK(result.out.find("0.0021") != std::string::npos);
}

TEST_CASE("run writes the same bytes to stdout and --out") {
  const auto out_path = std::filesystem::temp_directory_path() / "iotmm-run-out.json";
  const std::string scenario = scenario_dir() + "/gartner-2017.json";
  const auto to_stdout = run_cli("run --scenario " + scenario + " --format json");
  const auto to_file =
      run_cli("run --scenario " + scenario + " --format json --out " + out_path.string());
  CHECK(to_stdout.exit_code == 0);
  CHECK(to_file.exit_code == 0);
  CHECK(to_file.out.empty());
  CHECK(slurp(out_path) == to_stdout.out);
}

TEST_CASE("identical invocations produce byte-identical stdout") {
  const std::string args =
      "run --scenario " + scenario_dir() + "/thing-fixture.json --format json";
  const auto first = run_cli(args);
  const auto second = run_cli(args);
  CHECK(first.exit_code == 0);
  CHECK(first.out == second.out);
}

TEST_CASE("var prints one summary line per thing") {
  const auto result = run_cli("var --scenario " + scenario_dir() + "/thing-fixture.json");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("thing=plant-7 ") != std::string::npos);
  CHECK(result.out.find(" seed=20170417 ") != std::string::npos);
  CHECK(result.out.find(" var=") != std::string::npos);
  const char* golden_dir = std::getenv("IOTMM_GOLDEN_DIR");
  REQUIRE(golden_dir != nullptr);
  const auto golden = slurp(std::filesystem::path(golden_dir) / "thing-fixture.var.txt");
  REQUIRE_FALSE(golden.empty());
  CHECK(result.out == golden);
}

TEST_CASE("var confidence override is monotone") {
  const std::string base = "var --scenario " + scenario_dir() + "/thing-fixture.json";
  auto var_of = [&](const std::string& confidence) {
    const auto result = run_cli(base + " --confidence " + confidence);
    REQUIRE(result.exit_code == 0);
    const auto pos = result.out.find(" var=");
    REQUIRE(pos != std::string::npos);
    const auto end = result.out.find(' ', pos + 5);
    return std::stod(result.out.substr(pos + 5, end - pos - 5));
  };
  CHECK(var_of("0.999") >= var_of("0.5"));
}

TEST_CASE("var with zero paths exits 2") {
  const auto result =
      run_cli("var --scenario " + scenario_dir() + "/thing-fixture.json --paths 0");
  CHECK(result.exit_code == 2);
  CHECK(result.err.find("paths") != std::string::npos);
}

TEST_CASE("var on a thing-less scenario exits 2") {
  const auto result = run_cli("var --scenario " + scenario_dir() + "/gartner-2017.json");
  CHECK(result.exit_code == 2);
}

TEST_CASE("version flag prints engine and schema versions") {
  const auto result = run_cli("--version");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("iotmm 1.0.0") != std::string::npos);
  CHECK(result.out.find("schema") != std::string::npos);
}

TEST_CASE("unknown flags exit 2") {
  const auto result = run_cli("micromort --vulnerable 1 --total 2 --bogus 3");
  CHECK(result.exit_code == 2);
}
