#include "convbrowse/engine.hpp"

#include <algorithm>
#include <tuple>

#include "convbrowse/errors.hpp"

namespace convbrowse {

namespace {

DialogueAct act(DialogueActType type, std::string payload = {}) {
  return {type, std::move(payload)};
}

}  // namespace

DialogueEngine::DialogueEngine(const CatalogIndex& index, SelectionConfig config,
                               TemplateTable templates)
    : index_(&index), config_(config), templates_(std::move(templates)) {
  config_.validate();
}

std::vector<RankedEntity> DialogueEngine::eligible_entities(const CandidateSet& candidates,
                                                            std::string_view attribute) const {
  const auto attributes = index_->attributes();
  std::size_t slot = attributes.size();
  for (std::size_t a = 0; a < attributes.size(); ++a) {
    if (attributes[a].name == attribute) slot = a;
  }
  if (slot == attributes.size()) {
    throw ContractError("unknown attribute '" + std::string(attribute) + "'");
  }

  std::vector<std::size_t> counts(index_->entity_count(), 0);
  for (const auto item : candidates) {
    for (const auto e : index_->item_entities(item)) {
      if (index_->entity_attribute(e) == slot) ++counts[e];
    }
  }
  std::vector<RankedEntity> ranked;
  for (const auto e : attributes[slot].entities) {
    if (counts[e] >= 1 && counts[e] < candidates.size()) {
      ranked.push_back({index_->entity(e), counts[e]});
    }
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.entity.value < b.entity.value;
  });
  return ranked;
}

Message DialogueEngine::finalize(SessionState& state) const {
  const auto item = *state.candidates.begin();
  Message m;
  m.turn = state.turn;
  m.candidate_count = 1;
  m.record = index_->item_record(item);
  m.acts.push_back(act(DialogueActType::link_dataset, index_->item_id(item)));
  state.phase = Phase::finished;
  state.focus.reset();
  return m;
}

Message DialogueEngine::linear_page(SessionState& state) const {
  const auto& identifier = index_->manifest().identifier_attribute;
  std::vector<const EntityRef*> titles;
  for (const auto item : state.candidates) {
    titles.push_back(&index_->entity(index_->identifier_entity(item)));
  }
  std::sort(titles.begin(), titles.end(),
            [](const auto* a, const auto* b) { return a->value < b->value; });

  std::size_t offset = 0;
  if (state.focus && state.focus->attribute == identifier && state.focus->offset < titles.size()) {
    offset = state.focus->offset;
  }
  Message m;
  m.turn = state.turn;
  m.candidate_count = state.candidates.size();
  m.attribute_in_focus = identifier;
  for (std::size_t i = offset; i < titles.size() && m.offered_entities.size() < config_.l; ++i) {
    m.offered_entities.push_back(*titles[i]);
  }
  m.acts.push_back(act(DialogueActType::count_data, std::to_string(m.candidate_count)));
  m.acts.push_back(act(DialogueActType::list_keywords, identifier));
  m.acts.push_back(act(DialogueActType::prompt_link));
  state.focus = Focus{identifier, offset};
  state.phase = Phase::linear;
  return m;
}

Message DialogueEngine::compose_message(SessionState& state) const {
  if (state.done()) throw ContractError("compose_message on a finished session");
  if (state.candidates.empty()) throw ContractError("compose_message with no candidates");

  if (state.candidates.size() == 1) return finalize(state);

  if (state.turn >= config_.max_turns) {
    Message m;
    m.turn = state.turn;
    m.candidate_count = state.candidates.size();
    m.acts.push_back(act(DialogueActType::count_data, std::to_string(m.candidate_count)));
    m.acts.push_back(act(DialogueActType::verify));
    state.phase = Phase::halted;
    state.focus.reset();
    return m;
  }

  if (state.candidates.size() <= config_.effective_linear_threshold()) return linear_page(state);

  std::string attribute;
  std::vector<RankedEntity> page;
  std::size_t offset = 0;

  if (state.focus && index_->is_browsable(state.focus->attribute) &&
      !state.exhausted.contains(state.focus->attribute)) {
    const auto ranked = eligible_entities(state.candidates, state.focus->attribute);
    if (state.focus->offset < ranked.size()) {
      attribute = state.focus->attribute;
      offset = state.focus->offset;
      const auto last = std::min(ranked.size(), offset + config_.l);
      page.assign(ranked.begin() + static_cast<std::ptrdiff_t>(offset),
                  ranked.begin() + static_cast<std::ptrdiff_t>(last));
    }
  }

  if (page.empty()) {
    // Attribute whose best eligible entity scores highest; ties go to the
    // larger top-l score sum, then to the smaller attribute name.
    std::tuple<std::size_t, std::size_t> best_key{0, 0};
    for (const auto& a : index_->attributes()) {
      if (!a.browsable || state.exhausted.contains(a.name)) continue;
      auto ranked = eligible_entities(state.candidates, a.name);
      if (ranked.empty()) continue;
      if (ranked.size() > config_.l) ranked.resize(config_.l);
      std::size_t sum = 0;
      for (const auto& r : ranked) sum += r.score;
      const std::tuple<std::size_t, std::size_t> key{ranked.front().score, sum};
      if (page.empty() || key > best_key || (key == best_key && a.name < attribute)) {
        best_key = key;
        attribute = a.name;
        page = std::move(ranked);
      }
    }
    offset = 0;
  }

  if (page.empty()) return linear_page(state);

  Message m;
  m.turn = state.turn;
  m.candidate_count = state.candidates.size();
  m.attribute_in_focus = attribute;
  for (auto& r : page) m.offered_entities.push_back(std::move(r.entity));
  m.acts.push_back(act(DialogueActType::count_data, std::to_string(m.candidate_count)));
  m.acts.push_back(act(DialogueActType::list_keywords, attribute));
  m.acts.push_back(act(DialogueActType::prompt_keywords, attribute));
  state.focus = Focus{attribute, offset};
  state.phase = Phase::exploring;
  return m;
}

Message DialogueEngine::deliver(SessionState& state, Message message) const {
  message.rendered_text = render(message, templates_);
  for (auto& e : message.communicated_entities()) state.ledger.insert(std::move(e));
  state.transcript.emplace_back(message);
  return message;
}

std::pair<SessionState, Message> DialogueEngine::start_session() const {
  if (index_->item_count() == 0) throw ConfigurationError("catalog is empty");
  SessionState state;
  state.candidates = index_->all_items();
  state.turn = 1;
  auto m = compose_message(state);
  m.acts.insert(m.acts.begin(), act(DialogueActType::greeting, index_->manifest().name));
  if (!m.has_act(DialogueActType::count_data)) {
    m.acts.insert(m.acts.begin() + 1,
                  act(DialogueActType::count_data, std::to_string(index_->item_count())));
  }
  m = deliver(state, std::move(m));
  return {std::move(state), std::move(m)};
}

void DialogueEngine::validate_action(const SessionState& state, const Action& action) const {
  if (state.done()) throw ProtocolError("session_finished", "the session is already finished");
  const auto& latest = state.latest_message();
  switch (action.kind) {
    case ActionKind::select:
    case ActionKind::prune:
      if (action.entities.empty()) {
        throw ProtocolError("empty_entities",
                            std::string(to_string(action.kind)) + " needs at least one entity");
      }
      for (const auto& e : action.entities) {
        if (std::find(latest.offered_entities.begin(), latest.offered_entities.end(), e) ==
            latest.offered_entities.end()) {
          throw ProtocolError("not_offered",
                              "entity " + e.attribute + "=" + e.value + " was not offered");
        }
      }
      break;
    case ActionKind::skip:
    case ActionKind::more:
    case ActionKind::restart:
      if (!action.entities.empty()) {
        throw ProtocolError("unexpected_entities",
                            std::string(to_string(action.kind)) + " takes no entities");
      }
      break;
  }
}

void DialogueEngine::skip_focus(SessionState& state) const {
  const auto& identifier = index_->manifest().identifier_attribute;
  std::optional<std::string> attribute;
  if (state.focus) {
    attribute = state.focus->attribute;
  } else {
    attribute = state.latest_message().attribute_in_focus;
  }
  if (!attribute || *attribute == identifier) {
    // Skipping the title listing starts a fresh exploration cycle.
    state.exhausted.clear();
  } else {
    state.exhausted.insert(*attribute);
  }
  state.focus.reset();
}

Message DialogueEngine::apply_action(SessionState& state, const Action& action) const {
  validate_action(state, action);

  auto normalized = action;
  std::sort(normalized.entities.begin(), normalized.entities.end());
  normalized.entities.erase(std::unique(normalized.entities.begin(), normalized.entities.end()),
                            normalized.entities.end());
  state.transcript.emplace_back(ActionRecord{state.turn, normalized, state.candidates.size()});

  bool dead_end = false;
  switch (normalized.kind) {
    case ActionKind::select: {
      auto next = filter_items(*index_, state.candidates, normalized.entities);
      if (next.empty()) {
        dead_end = true;
        break;
      }
      state.candidates = std::move(next);
      state.focus.reset();
      std::erase_if(state.exhausted, [&](const std::string& attribute) {
        return !eligible_entities(state.candidates, attribute).empty();
      });
      break;
    }
    case ActionKind::skip:
      skip_focus(state);
      break;
    case ActionKind::more: {
      if (!state.focus) {
        skip_focus(state);
        break;
      }
      state.focus->offset += config_.l;
      const bool linear = state.focus->attribute == index_->manifest().identifier_attribute;
      const std::size_t available =
          linear ? state.candidates.size()
                 : eligible_entities(state.candidates, state.focus->attribute).size();
      if (state.focus->offset >= available) skip_focus(state);
      break;
    }
    case ActionKind::prune: {
      auto next = exclude_items(*index_, state.candidates, normalized.entities);
      if (next.empty()) {
        dead_end = true;
        break;
      }
      state.candidates = std::move(next);
      break;
    }
    case ActionKind::restart:
      state.candidates = index_->all_items();
      state.exhausted.clear();
      state.focus.reset();
      state.phase = Phase::exploring;
      break;
  }

  ++state.turn;
  auto reply = compose_message(state);
  if (dead_end) {
    reply.acts.insert(reply.acts.begin(), act(DialogueActType::bool_data, "no items match"));
  }
  return deliver(state, std::move(reply));
}

Message DialogueEngine::reprompt(const SessionState& state) const {
  const auto& latest = state.latest_message();
  Message m = latest;
  m.acts.clear();
  m.acts.push_back(act(DialogueActType::verify));
  for (const auto& a : latest.acts) {
    if (a.type == DialogueActType::list_keywords || a.type == DialogueActType::prompt_keywords ||
        a.type == DialogueActType::prompt_link) {
      m.acts.push_back(a);
    }
  }
  m.rendered_text = render(m, templates_);
  return m;
}

Message DialogueEngine::overview(std::size_t per_attribute) const {
  Message m;
  m.candidate_count = index_->item_count();
  m.acts.push_back(act(DialogueActType::count_data, std::to_string(m.candidate_count)));
  const auto all = index_->all_items();
  for (const auto& a : index_->attributes()) {
    if (!a.browsable) continue;
    const auto top = ranked_entities(*index_, a.name, all, 0, std::max<std::size_t>(per_attribute, 1));
    if (top.empty()) continue;
    std::string payload = a.name + ": ";
    for (std::size_t i = 0; i < top.size(); ++i) {
      if (i > 0) payload += ", ";
      payload += top[i].entity.value;
    }
    m.acts.push_back(act(DialogueActType::top_keywords, std::move(payload)));
  }
  m.rendered_text = render(m, templates_);
  return m;
}

}  // namespace convbrowse
