// Command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rlcthermo/rlcthermo.h"

namespace {

constexpr int kExitUsage = 2;

int fail(const std::string& message) {
  std::cerr << "rlcthermo: " << message << "\n";
  return kExitUsage;
}

bool set(rlc_config* config, const std::string& key, const std::string& value) {
  if (rlc_config_set(config, key.c_str(), value.c_str()) == RLC_OK) return true;
  std::cerr << "rlcthermo: " << rlc_last_error() << "\n";
  return false;
}

std::string in_quotes(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermodynamics of the quantized RLC circuit: closed forms checked against "
               "exact diagonalization"};
  app.set_version_flag("--version", std::string(rlc_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format;
  std::string cross_check;
  std::optional<double> tolerance;
  bool seedless = false;

  app.add_option("--config", config_path, "Configuration file (TOML subset)");
  app.add_option("--out", out_path, "Write the report/CSV/JSON here instead of stdout");
  app.add_option("--format", format, "Sweep output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--cross-check", cross_check, "Add oracle columns to sweeps")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--tolerance", tolerance,
                 "check: tolerance for every family; convergence: ladder tolerance; "
                 "sweeps: oracle ladder tolerance");
  app.add_flag("--seedless", seedless,
               "Accepted for scripting; every computation is deterministic already");

  app.add_subcommand("check", "Run the identity and closed-form check suite")->fallthrough();
  app.add_subcommand("sweep-entropy", "Entropy against resistance at fixed temperature")
      ->fallthrough();
  app.add_subcommand("sweep", "Closed-form (and oracle) observables over a parameter grid")
      ->fallthrough();
  app.add_subcommand("convergence", "Truncation ladder trace for one observable")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  rlc_config* config = nullptr;
  const rlc_status loaded = config_path.empty() ? rlc_config_parse(nullptr, &config)
                                                : rlc_config_load_file(config_path.c_str(), &config);
  if (loaded != RLC_OK) return fail(rlc_last_error());

  bool ok = true;
  if (!format.empty()) ok = ok && set(config, "output.format", in_quotes(format));
  if (!cross_check.empty()) {
    const std::string flag = cross_check == "on" ? "true" : "false";
    ok = ok && set(config, "sweep.cross_check", flag) &&
         set(config, "sweep_entropy.cross_check", flag);
  }
  if (tolerance) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", *tolerance);
    const std::string key = command == "check"         ? "check.tolerance"
                            : command == "convergence" ? "convergence.tolerance"
                                                       : "oracle.ladder_tolerance";
    ok = ok && set(config, key, buffer);
  }
  if (!ok) {
    rlc_config_free(config);
    return kExitUsage;
  }

  rlc_output* output = nullptr;
  if (rlc_run(command.c_str(), config, &output) != RLC_OK) {
    rlc_config_free(config);
    return fail(rlc_last_error());
  }
  rlc_config_free(config);

  const int exit_code = rlc_output_exit_code(output);
  const std::string content = rlc_output_content(output);
  const std::string summary = rlc_output_summary(output);
  rlc_output_free(output);

  if (content.empty()) {
    (exit_code == 0 ? std::cout : std::cerr) << summary;
    return exit_code;
  }
  if (out_path.empty()) {
    std::cout << content;
    std::cerr << summary;
    return exit_code;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << content;
  out.close();
  if (!out) return fail("cannot write " + out_path);
  std::cout << summary;
  return exit_code;
}
