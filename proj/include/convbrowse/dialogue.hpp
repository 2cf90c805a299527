#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "convbrowse/catalog.hpp"

namespace convbrowse {

/// Dialogue act vocabulary observed in human intermediary transcripts.
enum class DialogueActType {
  list_keywords,
  set_keywords,
  confirm,
  success,
  question_data,
  prompt_keywords,
  reject,
  greeting,
  bool_data,
  count_data,
  link_dataset,
  verify,
  more,
  top_keywords,
  prompt_link,
};

inline constexpr std::size_t kDialogueActTypeCount = 15;

/// Who may utter an act: the agent (Intermediary), the user (Seeker), or both.
enum class Speaker : unsigned { agent = 1, user = 2, both = 3 };

std::string_view to_string(DialogueActType type);
std::optional<DialogueActType> parse_act_type(std::string_view name);
Speaker legal_speakers(DialogueActType type);
bool agent_may_use(DialogueActType type);
bool user_may_use(DialogueActType type);
const std::array<DialogueActType, kDialogueActTypeCount>& all_act_types();

struct DialogueAct {
  DialogueActType type;
  std::string payload;

  bool operator==(const DialogueAct&) const = default;
};

struct SelectionConfig {
  /// Upper bound on entities offered per message.
  std::size_t l = 6;
  /// Linear mode starts once the candidate count is at most this value.
  /// Unset means max(1, l - 1).
  std::optional<std::size_t> linear_threshold;
  std::size_t max_turns = 200;

  std::size_t effective_linear_threshold() const;
  /// Throws ConfigurationError when a bound is zero.
  void validate() const;
};

/// One Intermediary turn.
struct Message {
  std::size_t turn = 0;
  std::vector<DialogueAct> acts;
  /// Entities the Seeker may select or prune; never more than l.
  std::vector<EntityRef> offered_entities;
  std::optional<std::string> attribute_in_focus;
  std::size_t candidate_count = 0;
  /// The delivered item on the final message.
  std::optional<ItemRecord> record;
  std::string rendered_text;

  bool has_act(DialogueActType type) const;
  bool is_final() const { return record.has_value(); }
  /// Offered entities plus every entity of the delivered record.
  std::vector<EntityRef> communicated_entities() const;

  bool operator==(const Message&) const = default;
};

enum class ActionKind { select, skip, more, prune, restart };

std::string_view to_string(ActionKind kind);
std::optional<ActionKind> parse_action_kind(std::string_view name);

/// One Seeker turn.
struct Action {
  ActionKind kind = ActionKind::skip;
  std::vector<EntityRef> entities;

  static Action select(std::vector<EntityRef> entities) {
    return {ActionKind::select, std::move(entities)};
  }
  static Action prune(std::vector<EntityRef> entities) {
    return {ActionKind::prune, std::move(entities)};
  }
  static Action skip() { return {ActionKind::skip, {}}; }
  static Action more() { return {ActionKind::more, {}}; }
  static Action restart() { return {ActionKind::restart, {}}; }

  bool operator==(const Action&) const = default;
};

enum class Phase { exploring, linear, finished, halted };

std::string_view to_string(Phase phase);

struct Focus {
  std::string attribute;
  std::size_t offset = 0;

  bool operator==(const Focus&) const = default;
  auto operator<=>(const Focus&) const = default;
};

/// A Seeker action recorded against the message it answered.
struct ActionRecord {
  std::size_t turn = 0;
  Action action;
  std::size_t candidate_count = 0;

  bool operator==(const ActionRecord&) const = default;
};

using TranscriptEntry = std::variant<Message, ActionRecord>;

/// The Intermediary's live belief about one dialogue.
struct SessionState {
  CandidateSet candidates;
  std::set<std::string> exhausted;
  std::optional<Focus> focus;
  /// Every entity communicated so far.
  std::set<EntityRef> ledger;
  std::size_t turn = 0;
  Phase phase = Phase::exploring;
  std::vector<TranscriptEntry> transcript;

  /// Throws ContractError when no message was sent yet.
  const Message& latest_message() const;
  bool done() const { return phase == Phase::finished || phase == Phase::halted; }
};

}  // namespace convbrowse
