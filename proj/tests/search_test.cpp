#include <doctest.h>

#include <cmath>
#include <random>

#include "convbrowse/errors.hpp"
#include "convbrowse/search.hpp"
#include "convbrowse/synthetic.hpp"
#include "fixtures.hpp"

using namespace convbrowse;

TEST_CASE("tokenize") {
  CHECK(tokenize("Transport, Vienna!") == std::vector<std::string>{"transport", "vienna"});
  CHECK(tokenize("item-12 a_b") == std::vector<std::string>{"item", "12", "a", "b"});
  CHECK(tokenize("  ").empty());
  CHECK(tokenize("caf\xC3\xA9 bar") == std::vector<std::string>{"caf\xC3\xA9", "bar"});
  CHECK(tokenize("parks cities walked", true) ==
        std::vector<std::string>{"park", "city", "walk"});
  CHECK(tokenize("parks", false) == std::vector<std::string>{"parks"});
}

TEST_CASE("toy catalog vocabulary") {
  const auto index = fixtures::t1();
  const auto s = SearchIndex::build(index);
  CHECK(s.document_count() == 4);
  CHECK(s.vocabulary() == std::vector<std::string>{"culture", "graz", "health", "linz", "t1", "t2",
                                                   "t3", "t4", "transport", "vienna"});
  CHECK(s.contains("vienna"));
  CHECK_FALSE(s.contains("immigration"));
}

TEST_CASE("tf-idf ranking on the toy catalog") {
  const auto index = fixtures::t1();
  const auto s = SearchIndex::build(index);
  const auto hits = s.search("transport vienna", 3);
  REQUIRE(hits.size() == 2);
  // transport: df 1 of 4; vienna: df 2 of 4.
  CHECK(hits[0].item_id == "r3");
  CHECK(hits[0].rank == 1);
  CHECK(hits[0].score == doctest::Approx(std::log(4.0) + std::log(2.0)));
  CHECK(hits[1].item_id == "r1");
  CHECK(hits[1].rank == 2);
  CHECK(hits[1].score == doctest::Approx(std::log(2.0)));

  CHECK(s.search("immigration", 3).empty());
  CHECK(s.search("", 3).empty());
  CHECK(s.search("Vienna vienna", 5).size() == 2);
  CHECK(s.search("health", 1).size() == 1);
  CHECK_THROWS_AS(s.search("health", 0), ContractError);

  const auto tie = s.search("health", 5);
  REQUIRE(tie.size() == 2);
  CHECK(tie[0].item_id == "r1");
  CHECK(tie[1].item_id == "r2");
}

TEST_CASE("exact identifiers rank first") {
  const auto spec = default_attribute_spec();
  const auto index =
      CatalogIndex::load_string(generate_synthetic_catalog(3, 300, spec), synthetic_manifest(spec));
  const auto s = SearchIndex::build(index);
  for (ItemIndex i = 0; i < index.item_count(); ++i) {
    const auto& title = index.entity(index.identifier_entity(i)).value;
    const auto hits = s.search(title, 10);
    REQUIRE_FALSE(hits.empty());
    CHECK(hits[0].item_id == index.item_id(i));
  }
}

TEST_CASE("search is deterministic and never fabricates matches") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rc = fixtures::random_catalog(rng, 10);
    const auto index = rc.load();
    const auto a = SearchIndex::build(index);
    const auto b = SearchIndex::build(index);
    CHECK(a.vocabulary() == b.vocabulary());
    for (const auto& q : {"v0", "v1 a0", "t1", "zzz", "v2 v3 v0"}) {
      const auto hits = a.search(q, 10);
      const auto again = b.search(q, 10);
      REQUIRE(hits.size() == again.size());
      for (std::size_t i = 0; i < hits.size(); ++i) {
        CHECK(hits[i].item_id == again[i].item_id);
        CHECK(hits[i].score == again[i].score);
        CHECK(hits[i].rank == i + 1);
        CHECK(hits[i].score >= 0.0);
        if (i > 0) {
          const bool ordered = hits[i - 1].score > hits[i].score ||
                               (hits[i - 1].score == hits[i].score &&
                                hits[i - 1].item_id < hits[i].item_id);
          CHECK(ordered);
        }
        // Every hit shares a token with the query.
        const auto rec = index.item_record(hits[i].item_id);
        bool overlap = false;
        for (const auto& qt : tokenize(q)) {
          for (const auto& x : rec.entities()) {
            for (const auto& t : tokenize(x.value)) overlap = overlap || t == qt;
          }
        }
        CHECK(overlap);
      }
    }
    CHECK(a.search("zzz", 10).empty());
  }
}
