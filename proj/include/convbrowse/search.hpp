#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "convbrowse/catalog.hpp"

namespace convbrowse {

struct SearchOptions {
  /// Light suffix stripping (-s, -es, -ies, -ed, -ing). Off by default so
  /// rephrased queries miss, as a plain keyword index would.
  bool stemming = false;
};

struct SearchHit {
  std::string item_id;
  double score = 0.0;
  /// 1-based.
  std::size_t rank = 0;
};

/// Lower-cased alphanumeric runs (non-ASCII UTF-8 bytes count as letters).
std::vector<std::string> tokenize(std::string_view text, bool stemming = false);

/// Keyword baseline: tf-idf over identifier and browsable attribute text.
class SearchIndex {
 public:
  static SearchIndex build(const CatalogIndex& index, SearchOptions options = {});

  /// Top-k items by summed tf-idf of the distinct query tokens, score
  /// descending then item id ascending. Items sharing no token with the
  /// query are absent. A query equal to an item's identifier ranks that
  /// item first.
  std::vector<SearchHit> search(std::string_view query, std::size_t k) const;

  /// Sorted token list.
  std::vector<std::string> vocabulary() const;
  bool contains(std::string_view token) const;
  std::size_t document_count() const { return item_ids_.size(); }

 private:
  struct Posting {
    ItemIndex item;
    double weight;
  };

  SearchOptions options_;
  std::vector<std::string> item_ids_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::unordered_map<std::string, ItemIndex> identifiers_;
};

}  // namespace convbrowse
