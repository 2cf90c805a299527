#include "convbrowse/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "convbrowse/errors.hpp"
#include "convbrowse/table.hpp"

namespace convbrowse {

std::vector<AttributeSpec> default_attribute_spec() {
  return {{"license", 10, 1.2, false},
          {"organization", 80, 1.1, false},
          {"categorization", 15, 1.0, false},
          {"tags", 300, 1.3, true}};
}

std::vector<AttributeSpec> parse_attribute_spec(std::string_view text) {
  std::vector<AttributeSpec> out;
  std::stringstream entries{std::string(text)};
  std::string entry;
  while (std::getline(entries, entry, ',')) {
    if (entry.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream fields(entry);
    std::string part;
    while (std::getline(fields, part, ':')) parts.push_back(part);
    if (parts.size() < 3 || parts.size() > 4) {
      throw ConfigurationError("attribute spec '" + entry + "' is not name:vocabulary:skew[:multi]");
    }
    AttributeSpec spec;
    spec.name = normalize_text(parts[0]);
    try {
      spec.vocabulary = std::stoul(parts[1]);
      spec.skew = std::stod(parts[2]);
    } catch (const std::exception&) {
      throw ConfigurationError("attribute spec '" + entry + "' has a bad number");
    }
    spec.multi_valued = parts.size() == 4 ? parts[3] == "multi" : spec.name == "tags";
    if (spec.name.empty() || spec.vocabulary < 1 || !(spec.skew >= 0.0)) {
      throw ConfigurationError("attribute spec '" + entry + "' is out of range");
    }
    out.push_back(std::move(spec));
  }
  if (out.empty()) throw ConfigurationError("attribute spec is empty");
  return out;
}

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t n) {
    return std::min(static_cast<std::size_t>(unit() * static_cast<double>(n)), n - 1);
  }

 private:
  std::mt19937_64 rng_;
};

std::vector<double> zipf_cdf(const AttributeSpec& spec) {
  std::vector<double> cdf(spec.vocabulary);
  double total = 0.0;
  for (std::size_t k = 0; k < spec.vocabulary; ++k) {
    total += std::pow(static_cast<double>(k + 1), -spec.skew);
    cdf[k] = total;
  }
  for (auto& c : cdf) c /= total;
  return cdf;
}

}  // namespace

std::string generate_synthetic_catalog(std::uint64_t seed, std::size_t n_items,
                                       const std::vector<AttributeSpec>& attributes) {
  if (n_items < 1) throw ContractError("synthetic catalog needs at least one item");
  for (const auto& a : attributes) {
    if (a.vocabulary < 1) throw ContractError("vocabulary of '" + a.name + "' is empty");
  }
  std::vector<std::vector<double>> cdfs;
  for (const auto& a : attributes) cdfs.push_back(zipf_cdf(a));

  Sampler sampler(seed);
  auto draw = [&](std::size_t a) {
    const auto& cdf = cdfs[a];
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), sampler.unit());
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
  };

  std::ostringstream out;
  std::vector<std::string> header{"title"};
  for (const auto& a : attributes) header.push_back(a.name);
  write_row(out, header, ';');

  for (std::size_t i = 0; i < n_items; ++i) {
    std::vector<std::string> row{"item-" + std::to_string(i + 1)};
    for (std::size_t a = 0; a < attributes.size(); ++a) {
      const auto& spec = attributes[a];
      if (!spec.multi_valued) {
        row.push_back(spec.name + "-" + std::to_string(draw(a) + 1));
        continue;
      }
      const auto wanted = std::min<std::size_t>(1 + sampler.below(4), spec.vocabulary);
      std::vector<std::size_t> picked;
      while (picked.size() < wanted) {
        const auto v = draw(a);
        if (std::find(picked.begin(), picked.end(), v) == picked.end()) picked.push_back(v);
      }
      std::string cell;
      for (const auto v : picked) {
        if (!cell.empty()) cell += ',';
        cell += spec.name + "-" + std::to_string(v + 1);
      }
      row.push_back(std::move(cell));
    }
    write_row(out, row, ';');
  }
  return out.str();
}

CatalogManifest synthetic_manifest(const std::vector<AttributeSpec>& attributes) {
  CatalogManifest m;
  m.identifier_attribute = "title";
  m.browsable_attributes.clear();
  for (const auto& a : attributes) m.browsable_attributes.push_back(a.name);
  m.name = "the synthetic catalog";
  m.validate();
  return m;
}

}  // namespace convbrowse
