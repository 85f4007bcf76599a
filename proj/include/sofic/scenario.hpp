#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "sofic/io.hpp"

namespace sofic {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitCap = 3;

enum class Command { Construct, Verify, Oracle, Explain };

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> carrier_cap;
  /// verify: replace the constructor's output with stored documents.
  std::optional<std::filesystem::path> map_path;
  std::optional<std::filesystem::path> witness_path;
};

struct RunResult {
  int exit_code = kExitFail;
  Json document;
  /// Plain-text summary, one fact per line.
  std::string summary;
};

/// Parses, resolves and runs a scenario document. Relative file references
/// are resolved against `base_dir`. Never throws: failures become exit codes
/// with a diagnostic in the document.
RunResult run_scenario(const Json& scenario, const std::filesystem::path& base_dir, Command command,
                       const RunOptions& options = {});

/// Reads the file first; unreadable or malformed JSON is a parse failure.
RunResult run_scenario_file(const std::filesystem::path& path, Command command, const RunOptions& options = {});

}  // namespace sofic
