#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "convbrowse/dialogue.hpp"
#include "convbrowse/errors.hpp"

namespace convbrowse {

using Json = nlohmann::ordered_json;

/// A JSON document that does not have the expected shape.
class WireFormatError : public Error {
 public:
  using Error::Error;
};

Json to_json(const EntityRef& entity);
EntityRef entity_from_json(const Json& j);

/// Wire form of an action: {"kind": "...", "entities": [{attribute, value}]}.
Json to_json(const Action& action);
Action action_from_json(const Json& j);

/// Full wire form of a message, as returned by the service.
Json to_json(const Message& message);

/// One transcript line. Agent lines carry
///   {turn, role:"A", acts, entities, candidate_count, attribute, item, text}
/// and Seeker lines
///   {turn, role:"U", kind, acts, entities, candidate_count}
/// where `entities` on an agent line lists everything communicated.
Json transcript_record(const TranscriptEntry& entry);

/// Line-delimited records, one per transcript entry, each ending in '\n'.
std::string export_transcript(const std::vector<TranscriptEntry>& transcript);

/// The Seeker actions of an exported transcript, in order.
std::vector<Action> replay_actions(std::istream& jsonl);

/// Dialogue act a Seeker action is recorded as.
DialogueActType user_act(ActionKind kind);

}  // namespace convbrowse
