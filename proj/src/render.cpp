#include "convbrowse/render.hpp"

#include <fstream>

#include "convbrowse/errors.hpp"
#include "convbrowse/table.hpp"

namespace convbrowse {

TemplateTable TemplateTable::defaults() {
  using T = DialogueActType;
  TemplateTable t;
  t.set(T::greeting, "Welcome to {payload}!");
  t.set(T::count_data, "{payload} datasets match.");
  t.set(T::list_keywords, "Which {payload} interests you? {options}");
  t.set(T::prompt_keywords, "— or say skip/more.");
  t.set(T::prompt_link, "— pick one to get its link, or say more.");
  t.set(T::link_dataset, "There you go: {item} [{record}]");
  t.set(T::bool_data, "Sorry, {payload}.");
  t.set(T::verify, "Is that what you are looking for?");
  t.set(T::top_keywords, "Most frequent {payload}.");
  t.set(T::confirm, "Okay.");
  t.set(T::success, "Glad I could help!");
  t.set(T::set_keywords, "I am interested in {payload}.");
  t.set(T::question_data, "What data do you have?");
  t.set(T::reject, "This is not what I am looking for.");
  t.set(T::more, "Show me more.");
  return t;
}

TemplateTable TemplateTable::parse(std::istream& in) {
  TemplateTable t;
  for (const auto& [key, value] : read_key_values(in)) {
    const auto type = parse_act_type(key);
    if (!type) throw ConfigurationError("templates: unknown dialogue act '" + key + "'");
    t.set(*type, value);
  }
  return t;
}

TemplateTable TemplateTable::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open template table " + path.string());
  return parse(in);
}

const std::string* TemplateTable::find(DialogueActType type) const {
  const auto it = templates_.find(type);
  return it == templates_.end() ? nullptr : &it->second;
}

std::string numbered_options(const Message& message) {
  std::string out;
  for (std::size_t i = 0; i < message.offered_entities.size(); ++i) {
    if (i > 0) out += ' ';
    out += "(" + std::to_string(i + 1) + ") " + message.offered_entities[i].value;
  }
  return out;
}

namespace {

std::string record_pairs(const ItemRecord& record) {
  std::string out;
  for (const auto& [attribute, values] : record.values) {
    if (!out.empty()) out += "; ";
    out += attribute + "=";
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i > 0) out += ", ";
      out += values[i];
    }
  }
  return out;
}

std::string expand(const std::string& pattern, const DialogueAct& act, const Message& m) {
  std::string out;
  std::size_t pos = 0;
  while (pos < pattern.size()) {
    const auto open = pattern.find('{', pos);
    if (open == std::string::npos) break;
    const auto close = pattern.find('}', open);
    if (close == std::string::npos) break;
    out.append(pattern, pos, open - pos);
    const auto key = pattern.substr(open + 1, close - open - 1);
    if (key == "payload") {
      out += act.payload;
    } else if (key == "count") {
      out += std::to_string(m.candidate_count);
    } else if (key == "attribute") {
      out += m.attribute_in_focus.value_or("");
    } else if (key == "options") {
      out += numbered_options(m);
    } else if (key == "item") {
      if (m.record && !m.record->values.empty() && !m.record->values.front().second.empty()) {
        out += m.record->values.front().second.front();
      }
    } else if (key == "record") {
      if (m.record) out += record_pairs(*m.record);
    } else {
      throw ConfigurationError("template placeholder {" + key + "} is unknown");
    }
    pos = close + 1;
  }
  out.append(pattern, pos, std::string::npos);
  return out;
}

}  // namespace

std::string render(const Message& message, const TemplateTable& templates) {
  std::string out;
  for (const auto& act : message.acts) {
    const auto* pattern = templates.find(act.type);
    if (pattern == nullptr) {
      throw ConfigurationError("no template for dialogue act '" + std::string(to_string(act.type)) +
                               "'");
    }
    auto piece = expand(*pattern, act, message);
    if (piece.empty()) continue;
    if (!out.empty()) out += ' ';
    out += piece;
  }
  return out;
}

}  // namespace convbrowse
