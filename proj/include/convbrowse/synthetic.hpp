#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "convbrowse/catalog.hpp"

namespace convbrowse {

struct AttributeSpec {
  std::string name;
  std::size_t vocabulary = 1;
  /// Zipf exponent: value k is drawn with weight k^-skew.
  double skew = 1.0;
  /// Multi-valued attributes get 1-4 distinct values per item.
  bool multi_valued = false;
};

/// license 10/1.2, organization 80/1.1, categorization 15/1.0, tags 300/1.3 (multi).
std::vector<AttributeSpec> default_attribute_spec();

/// "name:vocabulary:skew[:multi]" entries separated by commas. An entry
/// named "tags" is multi-valued unless stated otherwise.
std::vector<AttributeSpec> parse_attribute_spec(std::string_view text);

/// Deterministic ';'-separated table with a "title" column ("item-<k>")
/// followed by one column per attribute spec; values are "<name>-<rank>".
std::string generate_synthetic_catalog(std::uint64_t seed, std::size_t n_items,
                                       const std::vector<AttributeSpec>& attributes);

/// Manifest matching generate_synthetic_catalog output.
CatalogManifest synthetic_manifest(const std::vector<AttributeSpec>& attributes);

}  // namespace convbrowse
