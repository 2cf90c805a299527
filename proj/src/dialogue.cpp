#include "convbrowse/dialogue.hpp"

#include <algorithm>

#include "convbrowse/errors.hpp"

namespace convbrowse {

namespace {

struct ActInfo {
  DialogueActType type;
  std::string_view name;
  Speaker speakers;
};

constexpr std::array<ActInfo, kDialogueActTypeCount> kActs{{
    {DialogueActType::list_keywords, "list_keywords", Speaker::agent},
    {DialogueActType::set_keywords, "set_keywords", Speaker::user},
    {DialogueActType::confirm, "confirm", Speaker::both},
    {DialogueActType::success, "success", Speaker::both},
    {DialogueActType::question_data, "question_data", Speaker::user},
    {DialogueActType::prompt_keywords, "prompt_keywords", Speaker::agent},
    {DialogueActType::reject, "reject", Speaker::user},
    {DialogueActType::greeting, "greeting", Speaker::both},
    {DialogueActType::bool_data, "bool_data", Speaker::agent},
    {DialogueActType::count_data, "count_data", Speaker::agent},
    {DialogueActType::link_dataset, "link_dataset", Speaker::agent},
    {DialogueActType::verify, "verify", Speaker::both},
    {DialogueActType::more, "more", Speaker::user},
    {DialogueActType::top_keywords, "top_keywords", Speaker::agent},
    {DialogueActType::prompt_link, "prompt_link", Speaker::both},
}};

const ActInfo& info(DialogueActType type) {
  return kActs[static_cast<std::size_t>(type)];
}

}  // namespace

std::string_view to_string(DialogueActType type) { return info(type).name; }

std::optional<DialogueActType> parse_act_type(std::string_view name) {
  for (const auto& a : kActs) {
    if (a.name == name) return a.type;
  }
  return std::nullopt;
}

Speaker legal_speakers(DialogueActType type) { return info(type).speakers; }

bool agent_may_use(DialogueActType type) {
  return (static_cast<unsigned>(legal_speakers(type)) & static_cast<unsigned>(Speaker::agent)) != 0;
}

bool user_may_use(DialogueActType type) {
  return (static_cast<unsigned>(legal_speakers(type)) & static_cast<unsigned>(Speaker::user)) != 0;
}

const std::array<DialogueActType, kDialogueActTypeCount>& all_act_types() {
  static const auto types = [] {
    std::array<DialogueActType, kDialogueActTypeCount> out{};
    for (std::size_t i = 0; i < kActs.size(); ++i) out[i] = kActs[i].type;
    return out;
  }();
  return types;
}

std::size_t SelectionConfig::effective_linear_threshold() const {
  if (linear_threshold) return *linear_threshold;
  return l > 1 ? l - 1 : 1;
}

void SelectionConfig::validate() const {
  if (l < 1) throw ConfigurationError("selection config: l must be at least 1");
  if (linear_threshold && *linear_threshold < 1) {
    throw ConfigurationError("selection config: linear_threshold must be at least 1");
  }
  if (max_turns < 1) throw ConfigurationError("selection config: max_turns must be at least 1");
}

bool Message::has_act(DialogueActType type) const {
  return std::any_of(acts.begin(), acts.end(), [&](const auto& a) { return a.type == type; });
}

std::vector<EntityRef> Message::communicated_entities() const {
  auto out = offered_entities;
  if (record) {
    for (auto& e : record->entities()) out.push_back(std::move(e));
  }
  return out;
}

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::select: return "select";
    case ActionKind::skip: return "skip";
    case ActionKind::more: return "more";
    case ActionKind::prune: return "prune";
    case ActionKind::restart: return "restart";
  }
  return "?";
}

std::optional<ActionKind> parse_action_kind(std::string_view name) {
  for (auto k : {ActionKind::select, ActionKind::skip, ActionKind::more, ActionKind::prune,
                 ActionKind::restart}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::exploring: return "exploring";
    case Phase::linear: return "linear";
    case Phase::finished: return "finished";
    case Phase::halted: return "halted";
  }
  return "?";
}

const Message& SessionState::latest_message() const {
  for (auto it = transcript.rbegin(); it != transcript.rend(); ++it) {
    if (const auto* m = std::get_if<Message>(&*it)) return *m;
  }
  throw ContractError("session has no message yet");
}

}  // namespace convbrowse
