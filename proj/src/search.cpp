#include "convbrowse/search.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "convbrowse/errors.hpp"

namespace convbrowse {

namespace {

bool token_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string stem(std::string token) {
  if (token.size() > 4 && ends_with(token, "ies")) return token.substr(0, token.size() - 3) + "y";
  if (token.size() > 5 && ends_with(token, "ing")) return token.substr(0, token.size() - 3);
  if (token.size() > 4 && ends_with(token, "ed")) return token.substr(0, token.size() - 2);
  if (token.size() > 4 && ends_with(token, "es")) return token.substr(0, token.size() - 2);
  if (token.size() > 3 && ends_with(token, "s") && !ends_with(token, "ss")) {
    return token.substr(0, token.size() - 1);
  }
  return token;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, bool stemming) {
  const auto lowered = normalize_text(text);
  std::vector<std::string> out;
  std::string current;
  for (char ch : lowered) {
    if (token_char(static_cast<unsigned char>(ch))) {
      current.push_back(ch);
    } else if (!current.empty()) {
      out.push_back(stemming ? stem(std::move(current)) : std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(stemming ? stem(std::move(current)) : std::move(current));
  return out;
}

SearchIndex SearchIndex::build(const CatalogIndex& index, SearchOptions options) {
  SearchIndex s;
  s.options_ = options;
  std::map<std::string, std::vector<std::pair<ItemIndex, std::size_t>>> counts;
  for (ItemIndex item = 0; item < index.item_count(); ++item) {
    s.item_ids_.push_back(index.item_id(item));
    s.identifiers_.emplace(index.entity(index.identifier_entity(item)).value, item);
    std::map<std::string, std::size_t> tf;
    for (const auto e : index.item_entities(item)) {
      for (auto& t : tokenize(index.entity(e).value, options.stemming)) ++tf[t];
    }
    for (auto& [token, n] : tf) counts[token].emplace_back(item, n);
  }
  const double n_docs = static_cast<double>(s.item_ids_.size());
  for (auto& [token, docs] : counts) {
    const double idf = std::log(n_docs / static_cast<double>(docs.size()));
    auto& list = s.postings_[token];
    for (const auto& [item, n] : docs) list.push_back({item, static_cast<double>(n) * idf});
  }
  return s;
}

std::vector<SearchHit> SearchIndex::search(std::string_view query, std::size_t k) const {
  if (k < 1) throw ContractError("search: k must be at least 1");
  auto tokens = tokenize(query, options_.stemming);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());

  std::map<ItemIndex, double> scores;
  for (const auto& t : tokens) {
    const auto it = postings_.find(t);
    if (it == postings_.end()) continue;
    for (const auto& p : it->second) scores[p.item] += p.weight;
  }

  if (const auto exact = identifiers_.find(normalize_text(query)); exact != identifiers_.end()) {
    double best_other = 0.0;
    for (const auto& [item, score] : scores) {
      if (item != exact->second) best_other = std::max(best_other, score);
    }
    scores[exact->second] += best_other + 1.0;
  }

  std::vector<SearchHit> hits;
  for (const auto& [item, score] : scores) hits.push_back({item_ids_[item], score, 0});
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.item_id < b.item_id;
  });
  if (hits.size() > k) hits.resize(k);
  for (std::size_t i = 0; i < hits.size(); ++i) hits[i].rank = i + 1;
  return hits;
}

std::vector<std::string> SearchIndex::vocabulary() const {
  std::vector<std::string> out;
  for (const auto& [token, _] : postings_) out.push_back(token);
  std::sort(out.begin(), out.end());
  return out;
}

bool SearchIndex::contains(std::string_view token) const {
  return postings_.contains(std::string(token));
}

}  // namespace convbrowse
