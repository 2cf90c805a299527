#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace convbrowse {

using ItemIndex = std::uint32_t;
using EntityIndex = std::uint32_t;

/// NFC-normalize, lower-case and trim a UTF-8 label. Idempotent.
std::string normalize_text(std::string_view raw);

/// An attribute-scoped value. Identity is the (attribute, value) pair.
struct EntityRef {
  std::string attribute;
  std::string value;

  auto operator<=>(const EntityRef&) const = default;
};

struct ItemRecord {
  std::string item_id;
  /// Identifier attribute first, then browsable attributes in manifest
  /// order. Attributes the item lacks are omitted.
  std::vector<std::pair<std::string, std::vector<std::string>>> values;

  /// Every entity of the record, identifier included.
  std::vector<EntityRef> entities() const;
  const std::vector<std::string>* find(std::string_view attribute) const;

  bool operator==(const ItemRecord&) const = default;
};

struct CatalogManifest {
  std::string identifier_attribute = "title";
  std::vector<std::string> browsable_attributes = {"license", "organization",
                                                   "categorization", "tags"};
  char multi_value_delimiter = ',';
  char field_separator = ';';
  /// Display name used in the greeting.
  std::string name = "the catalog";

  /// Normalizes attribute names and checks the manifest invariants.
  /// Throws ConfigurationError.
  void validate();

  /// Parses `key = value` lines. Keys: identifier, browsable,
  /// multi_value_delimiter, field_separator, name.
  static CatalogManifest parse(std::istream& in);
  static CatalogManifest load_file(const std::filesystem::path& path);
};

/// Sorted, duplicate-free set of item indexes into one CatalogIndex.
class CandidateSet {
 public:
  CandidateSet() = default;
  explicit CandidateSet(std::vector<ItemIndex> items);

  std::span<const ItemIndex> items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  bool contains(ItemIndex item) const;

  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  bool operator==(const CandidateSet&) const = default;
  auto operator<=>(const CandidateSet&) const = default;

 private:
  std::vector<ItemIndex> items_;
};

/// The tripartite attribute / entity / item model of a tabular catalog.
/// Immutable after load; safe to share between threads.
class CatalogIndex {
 public:
  struct Attribute {
    std::string name;
    bool browsable = false;
    std::vector<EntityIndex> entities;
  };

  static CatalogIndex load(std::istream& table, CatalogManifest manifest);
  static CatalogIndex load_string(std::string_view table, CatalogManifest manifest);
  static CatalogIndex load_file(const std::filesystem::path& table,
                                CatalogManifest manifest);

  const CatalogManifest& manifest() const { return manifest_; }

  std::size_t item_count() const { return item_ids_.size(); }
  const std::string& item_id(ItemIndex item) const { return item_ids_.at(item); }
  std::optional<ItemIndex> find_item(std::string_view item_id) const;
  CandidateSet all_items() const;

  /// Attribute 0 is the identifier attribute; the rest are browsable.
  std::span<const Attribute> attributes() const { return attributes_; }
  const Attribute* find_attribute(std::string_view name) const;
  bool is_browsable(std::string_view name) const;

  std::size_t entity_count() const { return entities_.size(); }
  /// Entities of browsable attributes only.
  std::size_t browsable_entity_count() const;
  const EntityRef& entity(EntityIndex e) const { return entities_.at(e); }
  std::size_t entity_attribute(EntityIndex e) const { return entity_attribute_.at(e); }
  std::optional<EntityIndex> find_entity(const EntityRef& ref) const;
  /// Like find_entity but throws UnknownEntityError.
  EntityIndex require_entity(const EntityRef& ref) const;

  std::span<const ItemIndex> postings(EntityIndex e) const { return postings_.at(e); }
  /// Identifier entity first, then browsable entities in manifest order.
  std::span<const EntityIndex> item_entities(ItemIndex item) const {
    return item_entities_.at(item);
  }
  EntityIndex identifier_entity(ItemIndex item) const { return item_entities_.at(item).front(); }

  ItemRecord item_record(ItemIndex item) const;
  /// Throws ContractError for an unknown id.
  ItemRecord item_record(std::string_view item_id) const;

 private:
  CatalogManifest manifest_;
  std::vector<std::string> item_ids_;
  std::unordered_map<std::string, ItemIndex> item_lookup_;
  std::vector<Attribute> attributes_;
  std::vector<EntityRef> entities_;
  std::vector<std::size_t> entity_attribute_;
  std::map<EntityRef, EntityIndex> entity_lookup_;
  std::vector<std::vector<ItemIndex>> postings_;
  std::vector<std::vector<EntityIndex>> item_entities_;
};

struct RankedEntity {
  EntityRef entity;
  std::size_t score = 0;

  bool operator==(const RankedEntity&) const = default;
};

/// |postings(entity) ∩ candidates|. Throws UnknownEntityError.
std::size_t entity_score(const CatalogIndex& index, const EntityRef& entity,
                         const CandidateSet& candidates);

/// Entities of a browsable attribute with candidate-restricted score >= 1,
/// by score descending then value ascending; returns [offset, offset+limit).
std::vector<RankedEntity> ranked_entities(const CatalogIndex& index,
                                          std::string_view attribute,
                                          const CandidateSet& candidates,
                                          std::size_t offset, std::size_t limit);

/// Keeps items that match at least one selected entity of every attribute
/// group: OR within an attribute, AND across attributes.
CandidateSet filter_items(const CatalogIndex& index, const CandidateSet& candidates,
                          std::span<const EntityRef> selected);

/// Drops every candidate holding any pruned entity.
CandidateSet exclude_items(const CatalogIndex& index, const CandidateSet& candidates,
                           std::span<const EntityRef> pruned);

/// Maps item ids to a candidate set. Throws ContractError on unknown ids.
CandidateSet candidates_of(const CatalogIndex& index,
                           std::span<const std::string> item_ids);
std::vector<std::string> item_ids_of(const CatalogIndex& index,
                                     const CandidateSet& candidates);

}  // namespace convbrowse
