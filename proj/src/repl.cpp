#include "convbrowse/repl.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

#include "convbrowse/input.hpp"

namespace convbrowse {

namespace {

void print_hits(const DialogueEngine& engine, const SearchIndex& search, const std::string& query,
                std::ostream& out) {
  const auto hits = search.search(query, 10);
  if (hits.empty()) {
    out << "No results for \"" << query << "\". Try browsing instead.\n";
    return;
  }
  const auto& index = engine.index();
  for (const auto& h : hits) {
    const auto item = *index.find_item(h.item_id);
    out << h.rank << ". " << index.entity(index.identifier_entity(item)).value << " (" << h.item_id
        << ", score " << std::fixed << std::setprecision(3) << h.score << ")\n";
  }
}

}  // namespace

int run_repl(const DialogueEngine& engine, const SearchIndex& search, std::istream& in,
             std::ostream& out) {
  auto [state, message] = engine.start_session();
  out << message.rendered_text << '\n';

  std::string line;
  while (!state.done()) {
    out << "> " << std::flush;
    if (!std::getline(in, line)) {
      out << '\n';
      return 0;
    }
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto command = line.substr(first);

    if (command == ":quit") return 0;
    if (command == ":overview") {
      out << engine.overview(5).rendered_text << '\n';
      continue;
    }
    if (command.rfind(":search", 0) == 0) {
      auto query = command.substr(7);
      query.erase(0, std::min(query.size(), query.find_first_not_of(" \t")));
      print_hits(engine, search, query, out);
      continue;
    }

    Action action;
    try {
      action = command == ":restart" ? Action::restart()
                                     : parse_user_input(command, state.latest_message());
      message = engine.apply_action(state, action);
    } catch (const UnrecognizedInputError&) {
      out << engine.reprompt(state).rendered_text << '\n';
      continue;
    } catch (const ProtocolError& e) {
      out << e.what() << '\n';
      continue;
    }
    out << message.rendered_text << '\n';
  }

  if (state.phase == Phase::finished) {
    out << "Found " << message.record->item_id << " in " << state.turn << " turns.\n";
  } else {
    out << "Stopped after " << state.turn << " turns.\n";
  }
  return 0;
}

}  // namespace convbrowse
