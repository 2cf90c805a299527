#include "convbrowse/catalog.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "convbrowse/errors.hpp"
#include "convbrowse/table.hpp"

namespace convbrowse {

std::string normalize_text(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw ConfigurationError("ICU NFC normalizer unavailable");

  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  text.toLower(icu::Locale::getRoot());
  icu::UnicodeString normalized = nfc->normalize(text, status);
  if (U_FAILURE(status)) throw IngestionError("cannot normalize text: " + std::string(raw));

  int32_t begin = 0;
  int32_t end = normalized.length();
  while (begin < end && u_isUWhiteSpace(normalized.char32At(begin))) {
    begin = normalized.moveIndex32(begin, 1);
  }
  while (end > begin) {
    const int32_t prev = normalized.moveIndex32(end, -1);
    if (!u_isUWhiteSpace(normalized.char32At(prev))) break;
    end = prev;
  }
  std::string out;
  normalized.tempSubStringBetween(begin, end).toUTF8String(out);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<EntityRef> ItemRecord::entities() const {
  std::vector<EntityRef> out;
  for (const auto& [attribute, values] : values) {
    for (const auto& v : values) out.push_back({attribute, v});
  }
  return out;
}

const std::vector<std::string>* ItemRecord::find(std::string_view attribute) const {
  for (const auto& [name, vals] : values) {
    if (name == attribute) return &vals;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------

void CatalogManifest::validate() {
  identifier_attribute = normalize_text(identifier_attribute);
  if (identifier_attribute.empty()) {
    throw ConfigurationError("manifest: identifier attribute is empty");
  }
  if (browsable_attributes.empty()) {
    throw ConfigurationError("manifest: no browsable attributes");
  }
  std::set<std::string> seen;
  for (auto& attribute : browsable_attributes) {
    attribute = normalize_text(attribute);
    if (attribute.empty()) throw ConfigurationError("manifest: empty browsable attribute");
    if (attribute == identifier_attribute) {
      throw ConfigurationError("manifest: identifier attribute '" + attribute +
                               "' cannot also be browsable");
    }
    if (!seen.insert(attribute).second) {
      throw ConfigurationError("manifest: duplicate browsable attribute '" + attribute + "'");
    }
  }
  if (multi_value_delimiter == field_separator) {
    throw ConfigurationError("manifest: multi-value delimiter equals the field separator");
  }
}

namespace {

char single_char(const std::string& key, const std::string& value) {
  if (value == "\\t" || value == "tab") return '\t';
  if (value.size() != 1) {
    throw ConfigurationError("manifest: " + key + " must be a single character, got '" +
                             value + "'");
  }
  return value.front();
}

std::vector<std::string> split(std::string_view text, char delimiter) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(delimiter, start);
    parts.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

CatalogManifest CatalogManifest::parse(std::istream& in) {
  CatalogManifest m;
  bool have_identifier = false;
  bool have_browsable = false;
  for (const auto& [key, value] : read_key_values(in)) {
    if (key == "identifier") {
      m.identifier_attribute = value;
      have_identifier = true;
    } else if (key == "browsable") {
      m.browsable_attributes.clear();
      for (const auto& part : split(value, ',')) {
        if (!normalize_text(part).empty()) m.browsable_attributes.push_back(part);
      }
      have_browsable = true;
    } else if (key == "multi_value_delimiter") {
      m.multi_value_delimiter = single_char(key, value);
    } else if (key == "field_separator") {
      m.field_separator = single_char(key, value);
    } else if (key == "name") {
      m.name = value;
    } else {
      throw ConfigurationError("manifest: unknown key '" + key + "'");
    }
  }
  if (!have_identifier) throw ConfigurationError("manifest: missing key 'identifier'");
  if (!have_browsable) throw ConfigurationError("manifest: missing key 'browsable'");
  m.validate();
  return m;
}

CatalogManifest CatalogManifest::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open manifest " + path.string());
  return parse(in);
}

// ---------------------------------------------------------------------------

CandidateSet::CandidateSet(std::vector<ItemIndex> items) : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool CandidateSet::contains(ItemIndex item) const {
  return std::binary_search(items_.begin(), items_.end(), item);
}

// ---------------------------------------------------------------------------

CatalogIndex CatalogIndex::load(std::istream& in, CatalogManifest manifest) {
  manifest.validate();
  const Table table = read_table(in, manifest.field_separator);
  if (table.header.empty() || table.rows.empty()) {
    throw ConfigurationError("catalog table is empty");
  }

  std::unordered_map<std::string, std::size_t> columns;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    const auto name = normalize_text(table.header[i]);
    if (name.empty()) continue;
    if (!columns.emplace(name, i).second) {
      throw ConfigurationError("catalog header repeats column '" + name + "'");
    }
  }
  auto column_of = [&](const std::string& attribute) {
    const auto it = columns.find(attribute);
    if (it == columns.end()) {
      throw ConfigurationError("manifest references missing column '" + attribute + "'");
    }
    return it->second;
  };

  CatalogIndex index;
  index.manifest_ = manifest;
  std::vector<std::size_t> attribute_columns;
  index.attributes_.push_back({manifest.identifier_attribute, false, {}});
  attribute_columns.push_back(column_of(manifest.identifier_attribute));
  for (const auto& name : manifest.browsable_attributes) {
    index.attributes_.push_back({name, true, {}});
    attribute_columns.push_back(column_of(name));
  }

  auto intern = [&](std::size_t attribute, std::string value) {
    EntityRef ref{index.attributes_[attribute].name, std::move(value)};
    const auto it = index.entity_lookup_.find(ref);
    if (it != index.entity_lookup_.end()) return it->second;
    const auto e = static_cast<EntityIndex>(index.entities_.size());
    index.entity_lookup_.emplace(ref, e);
    index.entities_.push_back(std::move(ref));
    index.entity_attribute_.push_back(attribute);
    index.postings_.emplace_back();
    index.attributes_[attribute].entities.push_back(e);
    return e;
  };

  std::unordered_map<std::string, std::size_t> identifier_rows;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t row_no = r + 1;
    if (row.size() > table.header.size()) {
      throw IngestionError("row " + std::to_string(row_no) + " has " +
                           std::to_string(row.size()) + " fields, header has " +
                           std::to_string(table.header.size()));
    }
    auto cell = [&](std::size_t column) -> std::string_view {
      return column < row.size() ? std::string_view(row[column]) : std::string_view();
    };

    const auto item = static_cast<ItemIndex>(index.item_ids_.size());
    auto identifier = normalize_text(cell(attribute_columns[0]));
    if (identifier.empty()) {
      throw IngestionError("row " + std::to_string(row_no) + " has an empty " +
                           manifest.identifier_attribute);
    }
    const auto [prev, fresh] = identifier_rows.emplace(identifier, row_no);
    if (!fresh) {
      throw IngestionError("duplicate " + manifest.identifier_attribute + " '" + identifier +
                           "' in rows " + std::to_string(prev->second) + " and " +
                           std::to_string(row_no));
    }

    std::vector<EntityIndex> entities;
    entities.push_back(intern(0, std::move(identifier)));
    for (std::size_t a = 1; a < attribute_columns.size(); ++a) {
      const auto first = entities.size();
      for (const auto& part : split(cell(attribute_columns[a]), manifest.multi_value_delimiter)) {
        auto value = normalize_text(part);
        if (value.empty()) continue;
        const auto e = intern(a, std::move(value));
        if (std::find(entities.begin() + static_cast<std::ptrdiff_t>(first), entities.end(), e) ==
            entities.end()) {
          entities.push_back(e);
        }
      }
    }
    for (const auto e : entities) index.postings_[e].push_back(item);

    const auto id = "r" + std::to_string(row_no);
    index.item_lookup_.emplace(id, item);
    index.item_ids_.push_back(id);
    index.item_entities_.push_back(std::move(entities));
  }
  return index;
}

CatalogIndex CatalogIndex::load_string(std::string_view table, CatalogManifest manifest) {
  std::istringstream in{std::string(table)};
  return load(in, std::move(manifest));
}

CatalogIndex CatalogIndex::load_file(const std::filesystem::path& table,
                                     CatalogManifest manifest) {
  std::ifstream in(table, std::ios::binary);
  if (!in) throw ConfigurationError("cannot open catalog " + table.string());
  return load(in, std::move(manifest));
}

std::optional<ItemIndex> CatalogIndex::find_item(std::string_view item_id) const {
  const auto it = item_lookup_.find(std::string(item_id));
  if (it == item_lookup_.end()) return std::nullopt;
  return it->second;
}

CandidateSet CatalogIndex::all_items() const {
  std::vector<ItemIndex> all(item_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<ItemIndex>(i);
  return CandidateSet(std::move(all));
}

const CatalogIndex::Attribute* CatalogIndex::find_attribute(std::string_view name) const {
  for (const auto& a : attributes_) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

bool CatalogIndex::is_browsable(std::string_view name) const {
  const auto* a = find_attribute(name);
  return a != nullptr && a->browsable;
}

std::size_t CatalogIndex::browsable_entity_count() const {
  return entity_count() - attributes_.front().entities.size();
}

std::optional<EntityIndex> CatalogIndex::find_entity(const EntityRef& ref) const {
  const auto it = entity_lookup_.find(ref);
  if (it == entity_lookup_.end()) return std::nullopt;
  return it->second;
}

EntityIndex CatalogIndex::require_entity(const EntityRef& ref) const {
  if (auto e = find_entity(ref)) return *e;
  throw UnknownEntityError("unknown entity " + ref.attribute + "=" + ref.value);
}

ItemRecord CatalogIndex::item_record(ItemIndex item) const {
  ItemRecord record;
  record.item_id = item_id(item);
  for (const auto e : item_entities(item)) {
    const auto& name = attributes_[entity_attribute_[e]].name;
    if (record.values.empty() || record.values.back().first != name) {
      record.values.emplace_back(name, std::vector<std::string>{});
    }
    record.values.back().second.push_back(entities_[e].value);
  }
  return record;
}

ItemRecord CatalogIndex::item_record(std::string_view id) const {
  const auto item = find_item(id);
  if (!item) throw ContractError("unknown item '" + std::string(id) + "'");
  return item_record(*item);
}

// ---------------------------------------------------------------------------

namespace {

std::size_t intersection_size(std::span<const ItemIndex> a, const CandidateSet& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

std::size_t entity_score(const CatalogIndex& index, const EntityRef& entity,
                         const CandidateSet& candidates) {
  return intersection_size(index.postings(index.require_entity(entity)), candidates);
}

std::vector<RankedEntity> ranked_entities(const CatalogIndex& index, std::string_view attribute,
                                          const CandidateSet& candidates, std::size_t offset,
                                          std::size_t limit) {
  const auto* attr = index.find_attribute(attribute);
  if (attr == nullptr || !attr->browsable) {
    throw ContractError("attribute '" + std::string(attribute) + "' is not browsable");
  }
  if (limit == 0) throw ContractError("ranked_entities: limit must be at least 1");

  std::vector<RankedEntity> ranked;
  for (const auto e : attr->entities) {
    const auto score = intersection_size(index.postings(e), candidates);
    if (score > 0) ranked.push_back({index.entity(e), score});
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.entity.value < b.entity.value;
  });
  if (offset >= ranked.size()) return {};
  const auto last = std::min(ranked.size(), offset + limit);
  return {ranked.begin() + static_cast<std::ptrdiff_t>(offset),
          ranked.begin() + static_cast<std::ptrdiff_t>(last)};
}

CandidateSet filter_items(const CatalogIndex& index, const CandidateSet& candidates,
                          std::span<const EntityRef> selected) {
  if (selected.empty()) throw ContractError("filter_items: selection is empty");
  std::map<std::string, std::vector<ItemIndex>> groups;
  for (const auto& ref : selected) {
    const auto posting = index.postings(index.require_entity(ref));
    auto& group = groups[ref.attribute];
    group.insert(group.end(), posting.begin(), posting.end());
  }
  std::vector<ItemIndex> current(candidates.begin(), candidates.end());
  for (auto& [attribute, items] : groups) {
    std::sort(items.begin(), items.end());
    std::vector<ItemIndex> next;
    std::set_intersection(current.begin(), current.end(), items.begin(), items.end(),
                          std::back_inserter(next));
    current = std::move(next);
  }
  return CandidateSet(std::move(current));
}

CandidateSet exclude_items(const CatalogIndex& index, const CandidateSet& candidates,
                           std::span<const EntityRef> pruned) {
  if (pruned.empty()) throw ContractError("exclude_items: prune set is empty");
  std::vector<ItemIndex> drop;
  for (const auto& ref : pruned) {
    const auto posting = index.postings(index.require_entity(ref));
    drop.insert(drop.end(), posting.begin(), posting.end());
  }
  std::sort(drop.begin(), drop.end());
  std::vector<ItemIndex> kept;
  std::set_difference(candidates.begin(), candidates.end(), drop.begin(), drop.end(),
                      std::back_inserter(kept));
  return CandidateSet(std::move(kept));
}

CandidateSet candidates_of(const CatalogIndex& index, std::span<const std::string> item_ids) {
  std::vector<ItemIndex> items;
  for (const auto& id : item_ids) {
    const auto item = index.find_item(id);
    if (!item) throw ContractError("unknown item '" + id + "'");
    items.push_back(*item);
  }
  return CandidateSet(std::move(items));
}

std::vector<std::string> item_ids_of(const CatalogIndex& index, const CandidateSet& candidates) {
  std::vector<std::string> ids;
  for (const auto item : candidates) ids.push_back(index.item_id(item));
  return ids;
}

}  // namespace convbrowse
