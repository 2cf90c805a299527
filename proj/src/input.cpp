#include "convbrowse/input.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <vector>

#include "convbrowse/catalog.hpp"

namespace convbrowse {

namespace {

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::optional<std::size_t> as_number(const std::string& word) {
  std::size_t n = 0;
  const auto [end, ec] = std::from_chars(word.data(), word.data() + word.size(), n);
  if (ec != std::errc() || end != word.data() + word.size()) return std::nullopt;
  return n;
}

std::vector<EntityRef> containing(const Message& latest, const std::string& needle) {
  std::vector<EntityRef> out;
  if (needle.empty()) return out;
  for (const auto& e : latest.offered_entities) {
    if (e.value.find(needle) != std::string::npos) out.push_back(e);
  }
  return out;
}

std::vector<EntityRef> match_text(const Message& latest, const std::string& text) {
  auto hits = containing(latest, text);
  if (!hits.empty()) return hits;
  for (const auto& w : words(text)) {
    for (auto& e : containing(latest, w)) {
      if (std::find(hits.begin(), hits.end(), e) == hits.end()) hits.push_back(std::move(e));
    }
  }
  return hits;
}

}  // namespace

Action parse_user_input(std::string_view raw, const Message& latest) {
  const auto text = normalize_text(raw);
  if (text.empty()) throw UnrecognizedInputError("empty input");

  if (text == "skip") return Action::skip();
  if (text == "more") return Action::more();
  if (text == "restart") return Action::restart();

  if (latest.offered_entities.empty()) {
    throw UnrecognizedInputError("nothing to choose from in the latest message");
  }

  if (text.rfind("not ", 0) == 0) {
    const auto needle = normalize_text(std::string_view(text).substr(4));
    auto hits = match_text(latest, needle);
    if (hits.empty()) throw UnrecognizedInputError("no offer matches '" + needle + "'");
    return Action::prune(std::move(hits));
  }

  const auto tokens = words(text);
  std::vector<std::size_t> numbers;
  for (const auto& t : tokens) {
    const auto n = as_number(t);
    if (!n) break;
    numbers.push_back(*n);
  }
  if (!tokens.empty() && numbers.size() == tokens.size()) {
    std::vector<EntityRef> picked;
    for (const auto n : numbers) {
      if (n < 1 || n > latest.offered_entities.size()) {
        throw UnrecognizedInputError("option " + std::to_string(n) + " does not exist");
      }
      const auto& e = latest.offered_entities[n - 1];
      if (std::find(picked.begin(), picked.end(), e) == picked.end()) picked.push_back(e);
    }
    return Action::select(std::move(picked));
  }

  auto hits = match_text(latest, text);
  if (hits.empty()) throw UnrecognizedInputError("no offer matches '" + text + "'");
  return Action::select(std::move(hits));
}

}  // namespace convbrowse
