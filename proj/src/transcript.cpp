#include "convbrowse/transcript.hpp"

#include <istream>

namespace convbrowse {

Json to_json(const EntityRef& entity) {
  return Json{{"attribute", entity.attribute}, {"value", entity.value}};
}

EntityRef entity_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("attribute") || !j.contains("value") ||
      !j["attribute"].is_string() || !j["value"].is_string()) {
    throw WireFormatError("entity must be an object with string attribute and value");
  }
  return {j["attribute"].get<std::string>(), j["value"].get<std::string>()};
}

namespace {

Json entity_list(const std::vector<EntityRef>& entities) {
  auto out = Json::array();
  for (const auto& e : entities) out.push_back(to_json(e));
  return out;
}

}  // namespace

Json to_json(const Action& action) {
  return Json{{"kind", std::string(to_string(action.kind))},
              {"entities", entity_list(action.entities)}};
}

Action action_from_json(const Json& j) {
  if (!j.is_object()) throw WireFormatError("action must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw WireFormatError("action needs a string 'kind'");
  }
  const auto kind = parse_action_kind(j["kind"].get<std::string>());
  if (!kind) throw WireFormatError("unknown action kind '" + j["kind"].get<std::string>() + "'");
  Action action{*kind, {}};
  if (j.contains("entities")) {
    if (!j["entities"].is_array()) throw WireFormatError("'entities' must be an array");
    for (const auto& e : j["entities"]) action.entities.push_back(entity_from_json(e));
  }
  return action;
}

Json to_json(const Message& m) {
  Json acts = Json::array();
  for (const auto& a : m.acts) {
    acts.push_back(Json{{"type", std::string(to_string(a.type))}, {"payload", a.payload}});
  }
  Json j{{"turn", m.turn},
         {"acts", std::move(acts)},
         {"offered_entities", entity_list(m.offered_entities)},
         {"attribute_in_focus", m.attribute_in_focus ? Json(*m.attribute_in_focus) : Json()},
         {"candidate_count", m.candidate_count},
         {"text", m.rendered_text},
         {"finished", m.is_final()}};
  if (m.record) {
    Json values = Json::object();
    for (const auto& [attribute, vals] : m.record->values) values[attribute] = vals;
    j["record"] = Json{{"item_id", m.record->item_id}, {"values", std::move(values)}};
  } else {
    j["record"] = nullptr;
  }
  return j;
}

DialogueActType user_act(ActionKind kind) {
  switch (kind) {
    case ActionKind::select: return DialogueActType::set_keywords;
    case ActionKind::skip: return DialogueActType::reject;
    case ActionKind::more: return DialogueActType::more;
    case ActionKind::prune: return DialogueActType::reject;
    case ActionKind::restart: return DialogueActType::question_data;
  }
  return DialogueActType::reject;
}

Json transcript_record(const TranscriptEntry& entry) {
  if (const auto* m = std::get_if<Message>(&entry)) {
    Json acts = Json::array();
    for (const auto& a : m->acts) acts.push_back(std::string(to_string(a.type)));
    return Json{{"turn", m->turn},
                {"role", "A"},
                {"acts", std::move(acts)},
                {"entities", entity_list(m->communicated_entities())},
                {"candidate_count", m->candidate_count},
                {"attribute", m->attribute_in_focus ? Json(*m->attribute_in_focus) : Json()},
                {"item", m->record ? Json(m->record->item_id) : Json()},
                {"text", m->rendered_text}};
  }
  const auto& r = std::get<ActionRecord>(entry);
  return Json{{"turn", r.turn},
              {"role", "U"},
              {"kind", std::string(to_string(r.action.kind))},
              {"acts", Json::array({std::string(to_string(user_act(r.action.kind)))})},
              {"entities", entity_list(r.action.entities)},
              {"candidate_count", r.candidate_count}};
}

std::string export_transcript(const std::vector<TranscriptEntry>& transcript) {
  std::string out;
  for (const auto& entry : transcript) {
    out += transcript_record(entry).dump();
    out += '\n';
  }
  return out;
}

std::vector<Action> replay_actions(std::istream& jsonl) {
  std::vector<Action> actions;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(jsonl, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw WireFormatError("transcript line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("role")) {
      throw WireFormatError("transcript line " + std::to_string(line_no) + " has no role");
    }
    if (j["role"] == "U") actions.push_back(action_from_json(j));
  }
  return actions;
}

}  // namespace convbrowse
