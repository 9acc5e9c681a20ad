#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace levydev::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kConfig = 2, kNumericGuard = 3 };

struct RunContext {
  std::filesystem::path out_dir;
  unsigned workers = 1;
  std::ostream* warn = nullptr;  // JSON lines {"warning": ...}
};

// Hash of the command name and its effective config (seed included,
// workers excluded since they never change results).
std::string config_hash(const std::string& command, const nlohmann::json& config);

// Each runner validates `config`, writes its files under ctx.out_dir and
// returns the JSON summary it wrote. Errors: ConfigError, NumericGuardError,
// std::invalid_argument.
nlohmann::json run_mc_sup(const nlohmann::json& config, const RunContext& ctx);
nlohmann::json run_gumbel(const nlohmann::json& config, const RunContext& ctx);
nlohmann::json run_band(const nlohmann::json& config, const RunContext& ctx);
nlohmann::json run_simulate(const nlohmann::json& config, const RunContext& ctx);
nlohmann::json run_tails(const nlohmann::json& config, const RunContext& ctx);
nlohmann::json run_smalltime(const nlohmann::json& config, const RunContext& ctx);

// Full command line (args[0] is the program name). Errors go to `err` as a
// JSON object and select the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levydev::cli
