#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "convbrowse/dialogue.hpp"

namespace convbrowse {

/// Text template per dialogue act type.
///
/// Placeholders: {payload} (the act's payload), {count} (candidate count),
/// {attribute} (attribute in focus), {options} (offered entities numbered
/// from 1), {item} (identifier of the delivered record) and {record}
/// (attribute=value pairs of the delivered record).
class TemplateTable {
 public:
  static TemplateTable defaults();
  /// Reads `act_name = template` lines. Unknown act names are rejected.
  static TemplateTable parse(std::istream& in);
  static TemplateTable load_file(const std::filesystem::path& path);

  void set(DialogueActType type, std::string text) { templates_[type] = std::move(text); }
  void erase(DialogueActType type) { templates_.erase(type); }
  const std::string* find(DialogueActType type) const;

 private:
  std::map<DialogueActType, std::string> templates_;
};

/// Deterministic text for a message; throws ConfigurationError when an act
/// has no template.
std::string render(const Message& message, const TemplateTable& templates);

/// "(1) vienna (2) graz"
std::string numbered_options(const Message& message);

}  // namespace convbrowse
