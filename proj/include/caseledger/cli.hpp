#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace caseledger::cli {

/// Contents of <data_dir>/config.json.
struct CliConfig {
  std::filesystem::path data_dir;
  std::size_t tx_per_block = 10;
  std::string policy_path = "policy.json";
  /// Hex fingerprints of keys allowed to send Setup transactions.
  std::vector<std::string> admin_keys;
  std::optional<std::uint64_t> seed;

  nlohmann::ordered_json to_json() const;
  static CliConfig from_json(const nlohmann::json& j, std::filesystem::path data_dir);
};

/// Runs one command. `args` excludes the program name. Returns 0 on success,
/// 1 on a domain error, 2 on a usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace caseledger::cli
