#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "convbrowse/catalog.hpp"
#include "convbrowse/dialogue.hpp"
#include "convbrowse/render.hpp"

namespace convbrowse {

/// The Intermediary. Composes bounded messages over a shared catalog and
/// narrows each session's candidate set from Seeker actions.
///
/// Stateless apart from its configuration: all dialogue state lives in the
/// SessionState passed in, so one engine serves any number of sessions.
/// Calls on distinct sessions may run concurrently; calls on one session
/// must be serialized by the caller.
class DialogueEngine {
 public:
  DialogueEngine(const CatalogIndex& index, SelectionConfig config,
                 TemplateTable templates = TemplateTable::defaults());

  const CatalogIndex& index() const { return *index_; }
  const SelectionConfig& config() const { return config_; }
  const TemplateTable& templates() const { return templates_; }

  /// Opening turn: greeting, catalog size and the first batch of offers.
  std::pair<SessionState, Message> start_session() const;

  /// Builds the message for the current state. Updates only the state's
  /// phase and focus; the transcript, ledger and turn are left untouched.
  Message compose_message(SessionState& state) const;

  /// Applies one Seeker action and returns the reply, which is appended to
  /// the transcript. Throws ProtocolError (state untouched) for an action
  /// that does not fit the latest message.
  Message apply_action(SessionState& state, const Action& action) const;

  /// Throws ProtocolError when `action` is not legal against the latest message.
  void validate_action(const SessionState& state, const Action& action) const;

  /// Re-asks the latest question after unrecognized input. Not recorded.
  Message reprompt(const SessionState& state) const;

  /// Catalog overview: size plus the most frequent entities per attribute.
  Message overview(std::size_t per_attribute) const;

  /// Entities of `attribute` that split the candidates: score in
  /// [1, |candidates| - 1], by score descending then value ascending.
  std::vector<RankedEntity> eligible_entities(const CandidateSet& candidates,
                                              std::string_view attribute) const;

 private:
  Message deliver(SessionState& state, Message message) const;
  Message finalize(SessionState& state) const;
  Message linear_page(SessionState& state) const;
  void skip_focus(SessionState& state) const;

  const CatalogIndex* index_;
  SelectionConfig config_;
  TemplateTable templates_;
};

}  // namespace convbrowse
