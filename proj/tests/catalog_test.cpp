#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "convbrowse/catalog.hpp"
#include "convbrowse/errors.hpp"
#include "convbrowse/table.hpp"
#include "fixtures.hpp"

using namespace convbrowse;
using fixtures::cands;
using fixtures::e;
using fixtures::ids;

TEST_CASE("normalize_text lower-cases, trims and composes") {
  CHECK(normalize_text("  Sport ") == "sport");
  CHECK(normalize_text("HEALTH") == "health");
  // "e" + combining acute composes to U+00E9.
  CHECK(normalize_text("Caf\x65\xCC\x81") == "caf\xC3\xA9");
  CHECK(normalize_text("\xC3\x89TAT") == "\xC3\xA9tat");
  CHECK(normalize_text("\t \n") == "");
  const std::string once = normalize_text("  Wien  Stadt ");
  CHECK(normalize_text(once) == once);
}

TEST_CASE("load_catalog builds the toy catalog") {
  const auto index = fixtures::t1();
  CHECK(index.item_count() == 4);
  CHECK(index.attributes().size() == 3);
  CHECK(index.attributes()[0].name == "title");
  CHECK_FALSE(index.attributes()[0].browsable);
  CHECK(index.is_browsable("topic"));
  CHECK(index.is_browsable("city"));
  CHECK(index.browsable_entity_count() == 6);
  CHECK(index.entity_count() == 10);
}

TEST_CASE("load_catalog splits and normalizes multi-valued cells") {
  CatalogManifest m;
  m.identifier_attribute = "Title";
  m.browsable_attributes = {"Topic"};
  const auto index = CatalogIndex::load_string("Title;Topic\nA;health, Sport \nB;\n", m);
  CHECK(index.find_entity(e("topic", "health")));
  CHECK(index.find_entity(e("topic", "sport")));
  CHECK_FALSE(index.find_entity(e("topic", "")));
  const auto b = index.item_record("r2");
  REQUIRE(b.values.size() == 1);  // empty cell: attribute absent
  CHECK(b.values[0].first == "title");
}

TEST_CASE("load_catalog rejects bad input") {
  CatalogManifest m = fixtures::t1_manifest();
  SUBCASE("duplicate identifier names both rows") {
    try {
      CatalogIndex::load_string("title;topic;city\nx;a;b\ny;a;b\nX ;c;d\n", m);
      FAIL("expected IngestionError");
    } catch (const IngestionError& err) {
      const std::string what = err.what();
      CHECK(what.find("rows 1 and 3") != std::string::npos);
    }
  }
  SUBCASE("empty identifier") {
    CHECK_THROWS_AS(CatalogIndex::load_string("title;topic;city\n;a;b\n", m), IngestionError);
  }
  SUBCASE("missing column") {
    CHECK_THROWS_AS(CatalogIndex::load_string("title;topic\nx;a\n", m), ConfigurationError);
  }
  SUBCASE("empty table") {
    CHECK_THROWS_AS(CatalogIndex::load_string("", m), ConfigurationError);
    CHECK_THROWS_AS(CatalogIndex::load_string("title;topic;city\n", m), ConfigurationError);
  }
  SUBCASE("identifier listed as browsable") {
    m.browsable_attributes.push_back("Title");
    CHECK_THROWS_AS(CatalogIndex::load_string(fixtures::kT1Table, m), ConfigurationError);
  }
  SUBCASE("duplicate browsable attribute") {
    m.browsable_attributes = {"city", "City"};
    CHECK_THROWS_AS(CatalogIndex::load_string(fixtures::kT1Table, m), ConfigurationError);
  }
}

TEST_CASE("manifest file parsing") {
  std::istringstream in(
      "# comment\nidentifier = Title\nbrowsable = license, organization ,tags\n"
      "multi_value_delimiter = |\nfield_separator = tab\nname = Open Data\n");
  const auto m = CatalogManifest::parse(in);
  CHECK(m.identifier_attribute == "title");
  CHECK(m.browsable_attributes == std::vector<std::string>{"license", "organization", "tags"});
  CHECK(m.multi_value_delimiter == '|');
  CHECK(m.field_separator == '\t');
  CHECK(m.name == "Open Data");

  std::istringstream bad("identifier = title\nbrowsable = a\ncolour = red\n");
  CHECK_THROWS_AS(CatalogManifest::parse(bad), ConfigurationError);
  std::istringstream missing("browsable = a\n");
  CHECK_THROWS_AS(CatalogManifest::parse(missing), ConfigurationError);
}

TEST_CASE("read_table handles quoting and CRLF") {
  std::istringstream in("a;b\r\n\"x;1\";\"say \"\"hi\"\"\"\r\n\r\nq;\"multi\nline\"\n");
  const auto t = read_table(in, ';');
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0] == std::vector<std::string>{"x;1", "say \"hi\""});
  CHECK(t.rows[1] == std::vector<std::string>{"q", "multi\nline"});

  std::ostringstream out;
  write_row(out, {"x;1", "plain", "say \"hi\""}, ';');
  std::istringstream back("h1;h2;h3\n" + out.str());
  CHECK(read_table(back, ';').rows.at(0) == std::vector<std::string>{"x;1", "plain", "say \"hi\""});
}

TEST_CASE("entity_score on the toy catalog") {
  const auto index = fixtures::t1();
  const auto all = index.all_items();
  CHECK(entity_score(index, e("topic", "health"), all) == 2);
  CHECK(entity_score(index, e("city", "graz"), cands(index, {"r1", "r2", "r3"})) == 0);
  CHECK(entity_score(index, e("city", "vienna"), CandidateSet{}) == 0);
  CHECK_THROWS_AS(entity_score(index, e("city", "wien"), all), UnknownEntityError);
  // Entity identity is attribute-scoped.
  CHECK_THROWS_AS(entity_score(index, e("topic", "vienna"), all), UnknownEntityError);
}

TEST_CASE("ranked_entities ranks by score then value and pages") {
  const auto index = fixtures::t1();
  const auto all = index.all_items();

  // Oracle: hand count over the raw rows of the toy table.
  // city: vienna {t1,t3}=2, linz {t2}=1, graz {t4}=1; tie 1/1 -> graz < linz.
  const std::vector<RankedEntity> first{{e("city", "vienna"), 2}, {e("city", "graz"), 1}};
  const std::vector<RankedEntity> rest{{e("city", "linz"), 1}};
  CHECK(ranked_entities(index, "city", all, 0, 2) == first);
  CHECK(ranked_entities(index, "city", all, 2, 2) == rest);
  CHECK(ranked_entities(index, "city", all, 4, 2).empty());
  CHECK(ranked_entities(index, "topic", CandidateSet{}, 0, 5).empty());
  CHECK_THROWS_AS(ranked_entities(index, "title", all, 0, 2), ContractError);
  CHECK_THROWS_AS(ranked_entities(index, "nope", all, 0, 2), ContractError);
  CHECK_THROWS_AS(ranked_entities(index, "city", all, 0, 0), ContractError);
}

TEST_CASE("filter_items: OR within an attribute, AND across") {
  const auto index = fixtures::t1();
  const auto all = index.all_items();
  const std::vector<EntityRef> vienna{e("city", "vienna")};
  const std::vector<EntityRef> vienna_linz{e("city", "vienna"), e("city", "linz")};
  const std::vector<EntityRef> culture{e("topic", "culture")};
  const std::vector<EntityRef> health_vienna{e("topic", "health"), e("city", "vienna")};
  CHECK(ids(index, filter_items(index, all, vienna)) == std::vector<std::string>{"r1", "r3"});
  CHECK(ids(index, filter_items(index, all, vienna_linz)) ==
        std::vector<std::string>{"r1", "r2", "r3"});
  CHECK(filter_items(index, cands(index, {"r1", "r3"}), culture).empty());
  CHECK(ids(index, filter_items(index, all, health_vienna)) == std::vector<std::string>{"r1"});
  CHECK_THROWS_AS(filter_items(index, all, std::vector<EntityRef>{}), ContractError);
}

TEST_CASE("exclude_items drops any item holding a pruned entity") {
  const auto index = fixtures::t1();
  const auto all = index.all_items();
  const std::vector<EntityRef> health{e("topic", "health")};
  const std::vector<EntityRef> vienna_graz{e("city", "vienna"), e("city", "graz")};
  CHECK(ids(index, exclude_items(index, all, health)) == std::vector<std::string>{"r3", "r4"});
  CHECK(ids(index, exclude_items(index, all, vienna_graz)) == std::vector<std::string>{"r2"});
  CHECK(exclude_items(index, CandidateSet{}, health).empty());
}

TEST_CASE("item_record reads rows back") {
  const auto index = fixtures::t1();
  const auto r4 = index.item_record("r4");
  CHECK(r4.item_id == "r4");
  REQUIRE(r4.values.size() == 3);
  CHECK(r4.values[0] == std::pair<std::string, std::vector<std::string>>{"title", {"t4"}});
  CHECK(r4.values[1] == std::pair<std::string, std::vector<std::string>>{"topic", {"culture"}});
  CHECK(r4.values[2] == std::pair<std::string, std::vector<std::string>>{"city", {"graz"}});
  CHECK_THROWS_AS(index.item_record("zz"), ContractError);

  // Round trip: every row of the toy table comes back.
  std::istringstream in(fixtures::kT1Table);
  const auto table = read_table(in, ';');
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto rec = index.item_record("r" + std::to_string(r + 1));
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      const auto* vals = rec.find(table.header[c]);
      REQUIRE(vals != nullptr);
      CHECK(*vals == std::vector<std::string>{table.rows[r][c]});
    }
  }
}

TEST_CASE("catalog properties on random catalogs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rc = fixtures::random_catalog(rng, 12);
    const auto index = rc.load();
    const auto all = index.all_items();
    const auto all_rows = rc.naive.all();

    // Posting lists agree with the rows in both directions.
    for (EntityIndex x = 0; x < index.entity_count(); ++x) {
      const auto& ref = index.entity(x);
      CHECK(entity_score(index, ref, all) == index.postings(x).size());
      CHECK(entity_score(index, ref, all) == rc.naive.score(ref, all_rows));
    }

    // Random candidate subset for the set operations.
    std::vector<ItemIndex> subset;
    for (ItemIndex i = 0; i < index.item_count(); ++i) {
      if (rng() % 2) subset.push_back(i);
    }
    const CandidateSet c(subset);
    const std::set<std::size_t> c_rows(subset.begin(), subset.end());

    for (EntityIndex x = 0; x < index.entity_count(); ++x) {
      const std::vector<EntityRef> one{index.entity(x)};
      const auto kept = filter_items(index, c, one);
      const auto dropped = exclude_items(index, c, one);
      // Partition: disjoint, union is the input.
      std::vector<ItemIndex> merged(kept.begin(), kept.end());
      merged.insert(merged.end(), dropped.begin(), dropped.end());
      std::sort(merged.begin(), merged.end());
      CHECK(CandidateSet(merged) == c);
      CHECK(merged.size() == c.size());
      CHECK(fixtures::rows_of(kept) == rc.naive.select(c_rows, one));
    }

    // Multi-entity selections against the row-scan model; order does not matter.
    std::vector<EntityRef> pick;
    for (EntityIndex x = 0; x < index.entity_count(); ++x) {
      if (rng() % 3 == 0) pick.push_back(index.entity(x));
    }
    if (!pick.empty()) {
      const auto fwd = filter_items(index, c, pick);
      std::reverse(pick.begin(), pick.end());
      CHECK(filter_items(index, c, pick) == fwd);
      CHECK(fixtures::rows_of(fwd) == rc.naive.select(c_rows, pick));
      CHECK(fixtures::rows_of(exclude_items(index, c, pick)) == rc.naive.prune(c_rows, pick));
      for (auto i : fwd) CHECK(c.contains(i));
    }

    // Paging concatenates to the full ranking without gaps.
    for (const auto& name : rc.manifest.browsable_attributes) {
      const auto full = ranked_entities(index, name, c, 0, 1000);
      for (std::size_t k = 1; k <= 3; ++k) {
        std::vector<RankedEntity> joined;
        for (std::size_t off = 0; off < full.size() + k; off += k) {
          const auto page = ranked_entities(index, name, c, off, k);
          joined.insert(joined.end(), page.begin(), page.end());
        }
        CHECK(joined == full);
      }
      for (std::size_t i = 1; i < full.size(); ++i) {
        const bool ordered = full[i - 1].score > full[i].score ||
                             (full[i - 1].score == full[i].score &&
                              full[i - 1].entity.value < full[i].entity.value);
        CHECK(ordered);
      }
    }
  }
}

TEST_CASE("loading normalized output again is idempotent") {
  const auto index = CatalogIndex::load_string(
      "Title;Topic;City\n T1 ;HEALTH;Vienna\nt2; Health ;LINZ\n", fixtures::t1_manifest());
  std::ostringstream again;
  write_row(again, {"title", "topic", "city"}, ';');
  for (ItemIndex i = 0; i < index.item_count(); ++i) {
    const auto rec = index.item_record(i);
    write_row(again, {rec.find("title")->at(0), rec.find("topic")->at(0), rec.find("city")->at(0)},
              ';');
  }
  const auto reloaded = CatalogIndex::load_string(again.str(), fixtures::t1_manifest());
  REQUIRE(reloaded.entity_count() == index.entity_count());
  for (EntityIndex x = 0; x < index.entity_count(); ++x) {
    CHECK(reloaded.entity(x) == index.entity(x));
  }
}
