#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "convbrowse/dialogue.hpp"

namespace convbrowse {

/// Service configuration. File format is `key = value` lines with keys
/// host, port, catalog, manifest, templates, transcripts, l,
/// linear_threshold, max_turns, session_idle_minutes. Environment
/// variables named CONVBROWSE_<KEY> (upper-cased) override the file.
struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path catalog;
  std::filesystem::path manifest;
  std::optional<std::filesystem::path> templates;
  std::optional<std::filesystem::path> transcript_dir;
  SelectionConfig selection;
  std::chrono::seconds idle_expiry{30 * 60};

  void set(const std::string& key, const std::string& value);
  static ServerConfig parse(std::istream& in);
  static ServerConfig load_file(const std::filesystem::path& path);

  using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
  /// Applies CONVBROWSE_* overrides. Defaults to the process environment.
  void apply_environment(const EnvLookup& lookup = {});

  /// Port in [0, 65535] (0 = any free port); catalog and manifest readable;
  /// template file readable when set. Throws ConfigurationError.
  void validate() const;
};

inline constexpr std::string_view kEnvPrefix = "CONVBROWSE_";

}  // namespace convbrowse
