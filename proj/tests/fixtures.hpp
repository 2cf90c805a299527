#pragma once

// Shared test fixtures: the four-item toy catalog, a naive row-scan model
// of a catalog that never touches CatalogIndex, and a seeded generator of
// small random catalogs for property tests.

#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "convbrowse/catalog.hpp"
#include "convbrowse/dialogue.hpp"

namespace fixtures {

using convbrowse::EntityRef;

inline const char* kT1Table =
    "title;topic;city\n"
    "t1;health;vienna\n"
    "t2;health;linz\n"
    "t3;transport;vienna\n"
    "t4;culture;graz\n";

inline convbrowse::CatalogManifest t1_manifest() {
  convbrowse::CatalogManifest m;
  m.identifier_attribute = "title";
  m.browsable_attributes = {"topic", "city"};
  m.name = "the toy catalog";
  return m;
}

inline convbrowse::CatalogIndex t1() {
  return convbrowse::CatalogIndex::load_string(kT1Table, t1_manifest());
}

inline EntityRef e(std::string attribute, std::string value) {
  return {std::move(attribute), std::move(value)};
}

inline std::vector<std::string> ids(const convbrowse::CatalogIndex& index,
                                    const convbrowse::CandidateSet& c) {
  return convbrowse::item_ids_of(index, c);
}

inline convbrowse::CandidateSet cands(const convbrowse::CatalogIndex& index,
                                      std::vector<std::string> item_ids) {
  return convbrowse::candidates_of(index, item_ids);
}

/// Row-scan model over already-normalized rows; item ids are r1..rN.
struct NaiveCatalog {
  std::string identifier;
  std::vector<std::string> browsable;
  /// row -> attribute -> values
  std::vector<std::map<std::string, std::set<std::string>>> rows;

  bool has(std::size_t row, const EntityRef& x) const {
    const auto it = rows[row].find(x.attribute);
    return it != rows[row].end() && it->second.contains(x.value);
  }

  std::set<std::size_t> all() const {
    std::set<std::size_t> out;
    for (std::size_t i = 0; i < rows.size(); ++i) out.insert(i);
    return out;
  }

  std::size_t score(const EntityRef& x, const std::set<std::size_t>& c) const {
    std::size_t n = 0;
    for (auto r : c) n += has(r, x) ? 1 : 0;
    return n;
  }

  std::set<std::size_t> select(const std::set<std::size_t>& c,
                               const std::vector<EntityRef>& picked) const {
    std::set<std::size_t> out;
    for (auto r : c) {
      std::map<std::string, bool> group_hit;
      for (const auto& x : picked) group_hit[x.attribute] = group_hit[x.attribute] || has(r, x);
      bool keep = true;
      for (const auto& [_, hit] : group_hit) keep = keep && hit;
      if (keep) out.insert(r);
    }
    return out;
  }

  std::set<std::size_t> prune(const std::set<std::size_t>& c,
                              const std::vector<EntityRef>& picked) const {
    std::set<std::size_t> out;
    for (auto r : c) {
      bool hit = false;
      for (const auto& x : picked) hit = hit || has(r, x);
      if (!hit) out.insert(r);
    }
    return out;
  }

  std::set<EntityRef> entities_of(std::size_t row) const {
    std::set<EntityRef> out;
    for (const auto& [a, vals] : rows[row]) {
      for (const auto& v : vals) out.insert({a, v});
    }
    return out;
  }
};

inline std::set<std::size_t> rows_of(const convbrowse::CandidateSet& c) {
  return {c.begin(), c.end()};
}

/// A random catalog as table text plus the naive model of the same data.
struct RandomCatalog {
  std::string table;
  convbrowse::CatalogManifest manifest;
  NaiveCatalog naive;

  convbrowse::CatalogIndex load() const {
    return convbrowse::CatalogIndex::load_string(table, manifest);
  }
};

/// 1..max_items items, 1..3 browsable attributes with tiny vocabularies;
/// the last attribute is multi-valued half of the time; cells may be empty.
inline RandomCatalog random_catalog(std::mt19937_64& rng, std::size_t max_items) {
  auto below = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  RandomCatalog out;
  const std::size_t n_items = 1 + below(max_items);
  const std::size_t n_attrs = 1 + below(3);
  const bool multi = below(2) == 0;
  out.manifest.identifier_attribute = "title";
  out.manifest.browsable_attributes.clear();
  out.naive.identifier = "title";
  std::ostringstream table;
  table << "title";
  for (std::size_t a = 0; a < n_attrs; ++a) {
    const std::string name = "a" + std::to_string(a);
    out.manifest.browsable_attributes.push_back(name);
    out.naive.browsable.push_back(name);
    table << ';' << name;
  }
  table << '\n';
  for (std::size_t i = 0; i < n_items; ++i) {
    std::map<std::string, std::set<std::string>> row;
    const std::string title = "t" + std::to_string(i + 1);
    row["title"] = {title};
    table << title;
    for (std::size_t a = 0; a < n_attrs; ++a) {
      const std::string name = "a" + std::to_string(a);
      const std::size_t vocab = 2 + below(3);
      std::set<std::string> values;
      if (below(6) != 0) {
        values.insert("v" + std::to_string(below(vocab)));
        if (multi && a + 1 == n_attrs && below(2) == 0) values.insert("v" + std::to_string(below(vocab)));
      }
      std::string cell;
      for (const auto& v : values) cell += (cell.empty() ? "" : ",") + v;
      table << ';' << cell;
      if (!values.empty()) row[name] = values;
    }
    table << '\n';
    out.naive.rows.push_back(std::move(row));
  }
  out.table = table.str();
  return out;
}

}  // namespace fixtures
