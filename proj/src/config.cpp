#include "convbrowse/config.hpp"

#include <array>
#include <cctype>
#include <cstdlib>
#include <fstream>

#include "convbrowse/errors.hpp"
#include "convbrowse/table.hpp"

namespace convbrowse {

namespace {

constexpr std::array<std::string_view, 10> kKeys{
    "host", "port", "catalog", "manifest", "templates", "transcripts",
    "l", "linear_threshold", "max_turns", "session_idle_minutes"};

long parse_number(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long n = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return n;
  } catch (const std::exception&) {
    throw ConfigurationError("config: " + key + " must be an integer, got '" + value + "'");
  }
}

std::size_t positive(const std::string& key, const std::string& value) {
  const auto n = parse_number(key, value);
  if (n < 1) throw ConfigurationError("config: " + key + " must be at least 1");
  return static_cast<std::size_t>(n);
}

void require_readable(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path);
  if (path.empty() || !in) {
    throw ConfigurationError("config: " + std::string(what) + " '" + path.string() +
                             "' is not readable");
  }
}

}  // namespace

void ServerConfig::set(const std::string& key, const std::string& value) {
  if (key == "host") {
    host = value;
  } else if (key == "port") {
    port = static_cast<int>(parse_number(key, value));
  } else if (key == "catalog") {
    catalog = value;
  } else if (key == "manifest") {
    manifest = value;
  } else if (key == "templates") {
    templates = value.empty() ? std::nullopt : std::optional<std::filesystem::path>(value);
  } else if (key == "transcripts") {
    transcript_dir = value.empty() ? std::nullopt : std::optional<std::filesystem::path>(value);
  } else if (key == "l") {
    selection.l = positive(key, value);
  } else if (key == "linear_threshold") {
    selection.linear_threshold = positive(key, value);
  } else if (key == "max_turns") {
    selection.max_turns = positive(key, value);
  } else if (key == "session_idle_minutes") {
    idle_expiry = std::chrono::minutes(positive(key, value));
  } else {
    throw ConfigurationError("config: unknown key '" + key + "'");
  }
}

ServerConfig ServerConfig::parse(std::istream& in) {
  ServerConfig config;
  for (const auto& [key, value] : read_key_values(in)) config.set(key, value);
  return config;
}

ServerConfig ServerConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config " + path.string());
  auto config = parse(in);
  // Relative paths in the file are relative to the file.
  const auto base = path.parent_path();
  auto rebase = [&](std::filesystem::path& p) {
    if (!p.empty() && p.is_relative()) p = base / p;
  };
  rebase(config.catalog);
  rebase(config.manifest);
  if (config.templates) rebase(*config.templates);
  if (config.transcript_dir) rebase(*config.transcript_dir);
  return config;
}

void ServerConfig::apply_environment(const EnvLookup& lookup) {
  for (const auto key : kKeys) {
    std::string name(kEnvPrefix);
    for (char c : key) name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    std::optional<std::string> value;
    if (lookup) {
      value = lookup(name);
    } else if (const char* env = std::getenv(name.c_str())) {
      value = env;
    }
    if (value) set(std::string(key), *value);
  }
}

void ServerConfig::validate() const {
  if (port < 0 || port > 65535) {
    throw ConfigurationError("config: port " + std::to_string(port) + " is out of range");
  }
  require_readable(catalog, "catalog");
  require_readable(manifest, "manifest");
  if (templates) require_readable(*templates, "template table");
  selection.validate();
}

}  // namespace convbrowse
