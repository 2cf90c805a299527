#include <doctest.h>

#include <random>
#include <sstream>

#include "convbrowse/engine.hpp"
#include "convbrowse/errors.hpp"
#include "convbrowse/simulator.hpp"
#include "convbrowse/synthetic.hpp"
#include "convbrowse/transcript.hpp"
#include "fixtures.hpp"

using namespace convbrowse;
using fixtures::e;

namespace {

SelectionConfig with_l(std::size_t l) {
  SelectionConfig c;
  c.l = l;
  return c;
}

}  // namespace

TEST_CASE("seeker policy") {
  const auto index = fixtures::t1();
  Message m;
  m.attribute_in_focus = "city";
  m.offered_entities = {e("city", "vienna"), e("city", "graz")};

  SeekerState r1{{}, GoalSpec::for_item(index, "r1"), {}};
  CHECK(seeker_policy(r1, m) == Action::select({e("city", "vienna")}));
  r1.observe(m);
  r1.selected.insert(e("city", "vienna"));
  CHECK(seeker_policy(r1, m) == Action::skip());

  SeekerState r2{{}, GoalSpec::for_item(index, "r2"), {}};
  r2.observe(m);
  CHECK(seeker_policy(r2, m) == Action::more());

  Message other;
  other.attribute_in_focus = "colour";
  other.offered_entities = {e("colour", "red")};
  CHECK(seeker_policy(r2, other) == Action::skip());

  Message final_message;
  final_message.record = index.item_record("r2");
  CHECK_THROWS_AS(seeker_policy(r2, final_message), ContractError);
}

TEST_CASE("goal spec flattens the record") {
  const auto index = fixtures::t1();
  const auto g = GoalSpec::for_item(index, "r3");
  CHECK(g.item == "r3");
  CHECK(g.goal_entities ==
        std::set<EntityRef>{e("title", "t3"), e("topic", "transport"), e("city", "vienna")});
}

TEST_CASE("simulate on the toy catalog") {
  const auto index = fixtures::t1();
  const auto r2 = simulate(index, with_l(2), GoalSpec::for_item(index, "r2"));
  CHECK(r2.success);
  CHECK(r2.turns == 3);
  CHECK(r2.action_trace == std::vector<Action>{Action::more(), Action::select({e("city", "linz")})});

  const auto r4 = simulate(index, with_l(2), GoalSpec::for_item(index, "r4"));
  CHECK(r4.success);
  CHECK(r4.turns == 2);
  CHECK(r4.action_trace == std::vector<Action>{Action::select({e("city", "graz")})});

  CHECK_THROWS_AS(simulate(index, with_l(2), GoalSpec{"r9", {}}), ContractError);
}

TEST_CASE("brute force oracle on the toy catalog") {
  const auto index = fixtures::t1();
  CHECK(brute_force_min_turns(index, with_l(2), GoalSpec::for_item(index, "r4")) == 2);
  // Pruning both offered cities leaves r2 alone, so two messages suffice.
  CHECK(brute_force_min_turns(index, with_l(2), GoalSpec::for_item(index, "r2")) == 2);
  for (const char* id : {"r1", "r2", "r3", "r4"}) {
    const auto goal = GoalSpec::for_item(index, id);
    CHECK(simulate(index, with_l(2), goal).turns >= brute_force_min_turns(index, with_l(2), goal));
  }
}

TEST_CASE("single-item catalogs take one turn") {
  const auto index =
      CatalogIndex::load_string("title;topic;city\nonly;x;y\n", fixtures::t1_manifest());
  const auto goal = GoalSpec::for_item(index, "r1");
  for (std::size_t l = 1; l <= 4; ++l) {
    const auto r = simulate(index, with_l(l), goal);
    CHECK(r.success);
    CHECK(r.turns == 1);
  }
  CHECK(brute_force_min_turns(index, with_l(2), goal) == 1);
}

TEST_CASE("brute force refuses large catalogs") {
  const auto table = generate_synthetic_catalog(1, 11, default_attribute_spec());
  const auto index = CatalogIndex::load_string(table, synthetic_manifest(default_attribute_spec()));
  CHECK_THROWS_AS(brute_force_min_turns(index, with_l(3), GoalSpec::for_item(index, "r1")),
                  ContractError);
}

TEST_CASE("completeness and oracle dominance on random catalogs") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const auto rc = fixtures::random_catalog(rng, 7);
    const auto index = rc.load();
    const auto config = with_l(1 + rng() % 4);
    for (ItemIndex i = 0; i < index.item_count(); ++i) {
      const auto goal = GoalSpec::for_item(index, index.item_id(i));
      const auto r = simulate(index, config, goal);
      CHECK(r.success);
      if (index.item_count() >= 2) CHECK(r.turns >= 2);
      CHECK(r.turns >= brute_force_min_turns(index, config, goal));
    }
  }
}

TEST_CASE("simulation transcripts follow the wire schema") {
  const auto index = fixtures::t1();
  const auto r = simulate(index, with_l(2), GoalSpec::for_item(index, "r2"));
  std::istringstream in(export_transcript(r.transcript));
  CHECK(replay_actions(in) == r.action_trace);
}

TEST_CASE("sweep goals are reproducible and spread") {
  CHECK(sweep_goal(42, 6, 0, 2000) == sweep_goal(42, 6, 0, 2000));
  std::set<std::size_t> seen;
  for (std::size_t run = 0; run < 200; ++run) {
    const auto g = sweep_goal(42, 6, run, 10);
    CHECK(g < 10);
    seen.insert(g);
  }
  CHECK(seen.size() == 10);
  CHECK_THROWS_AS(sweep_goal(1, 1, 1, 0), ContractError);
}

TEST_CASE("sweep is deterministic and independent of the thread count") {
  const auto spec = default_attribute_spec();
  const auto index =
      CatalogIndex::load_string(generate_synthetic_catalog(5, 150, spec), synthetic_manifest(spec));
  SweepOptions serial;
  serial.threads = 1;
  SweepOptions parallel;
  parallel.threads = 4;
  const auto a = sweep(index, {3, 4, 5}, 40, 7, serial);
  const auto b = sweep(index, {3, 4, 5}, 40, 7, parallel);
  CHECK(a == b);
  CHECK(a.rows.size() == 3);
  for (const auto& row : a.rows) {
    CHECK(row.failures == 0);
    CHECK(row.min_turns <= row.mean_turns);
    CHECK(row.mean_turns <= static_cast<double>(row.max_turns));
  }

  std::size_t calls = 0;
  SweepOptions traced;
  traced.on_result = [&](std::size_t l, std::size_t run, const SimResult& r) {
    CHECK(l >= 3);
    CHECK(run < 2);
    CHECK_FALSE(r.transcript.empty());
    ++calls;
  };
  sweep(index, {3, 4}, 2, 7, traced);
  CHECK(calls == 4);

  const auto single = sweep(index, {6}, 1, 3);
  CHECK(static_cast<double>(single.rows[0].min_turns) == single.rows[0].mean_turns);
  CHECK(single.rows[0].min_turns == single.rows[0].max_turns);

  CHECK_THROWS_AS(sweep(index, {}, 3, 1), ContractError);
  CHECK_THROWS_AS(sweep(index, {3}, 0, 1), ContractError);
}

TEST_CASE("sweep table format") {
  SweepReport report;
  report.rows = {{3, 500, 0, 2, 12.345, 40}, {4, 500, 1, 2, 10.0, 33}};
  std::ostringstream out;
  write_sweep_table(out, report);
  CHECK(out.str() ==
        "l\truns\tfailures\tmin\tmean\tmax\n3\t500\t0\t2\t12.35\t40\n4\t500\t1\t2\t10.00\t33\n");
}

TEST_CASE("parse_l_values") {
  CHECK(parse_l_values("3..8") == std::vector<std::size_t>{3, 4, 5, 6, 7, 8});
  CHECK(parse_l_values("6") == std::vector<std::size_t>{6});
  CHECK(parse_l_values("3,4,6") == std::vector<std::size_t>{3, 4, 6});
  CHECK_THROWS_AS(parse_l_values("8..3"), ConfigurationError);
  CHECK_THROWS_AS(parse_l_values("0..3"), ConfigurationError);
  CHECK_THROWS_AS(parse_l_values("a"), ConfigurationError);
  CHECK_THROWS_AS(parse_l_values("3,,4"), ConfigurationError);
}

TEST_CASE("synthetic catalog generator") {
  const auto spec = default_attribute_spec();
  REQUIRE(spec.size() == 4);
  CHECK(spec[0].name == "license");
  CHECK(spec[3].multi_valued);

  const auto a = generate_synthetic_catalog(42, 2000, spec);
  CHECK(a == generate_synthetic_catalog(42, 2000, spec));
  CHECK(a != generate_synthetic_catalog(43, 2000, spec));
  const auto index = CatalogIndex::load_string(a, synthetic_manifest(spec));
  CHECK(index.item_count() == 2000);
  std::set<std::string> titles;
  for (ItemIndex i = 0; i < index.item_count(); ++i) {
    titles.insert(index.entity(index.identifier_entity(i)).value);
  }
  CHECK(titles.size() == 2000);
  CHECK(index.attributes().size() == 5);

  // Zipf skew: the top license value is more frequent than the last one.
  const auto all = index.all_items();
  const auto ranked = ranked_entities(index, "license", all, 0, 100);
  REQUIRE(ranked.size() >= 2);
  CHECK(ranked.front().score > ranked.back().score);
  CHECK(ranked.front().entity.value == "license-1");

  // Multi-valued tags hold 1-4 values.
  for (ItemIndex i = 0; i < index.item_count(); ++i) {
    const auto rec = index.item_record(i);
    const auto* tags = rec.find("tags");
    REQUIRE(tags != nullptr);
    CHECK(tags->size() >= 1);
    CHECK(tags->size() <= 4);
  }

  const auto one = generate_synthetic_catalog(42, 1, spec);
  CHECK(CatalogIndex::load_string(one, synthetic_manifest(spec)).item_count() == 1);
  CHECK_THROWS_AS(generate_synthetic_catalog(42, 0, spec), ContractError);
}

TEST_CASE("attribute spec parsing") {
  const auto s = parse_attribute_spec("license:5:4.7,tags:50:1.3,kind:3:1:multi");
  REQUIRE(s.size() == 3);
  CHECK(s[0].name == "license");
  CHECK(s[0].vocabulary == 5);
  CHECK(s[0].skew == doctest::Approx(4.7));
  CHECK_FALSE(s[0].multi_valued);
  CHECK(s[1].multi_valued);
  CHECK(s[2].multi_valued);
  CHECK_THROWS_AS(parse_attribute_spec("license"), ConfigurationError);
  CHECK_THROWS_AS(parse_attribute_spec("license:x:1"), ConfigurationError);
  CHECK_THROWS_AS(parse_attribute_spec("license:0:1"), ConfigurationError);
  CHECK_THROWS_AS(parse_attribute_spec(""), ConfigurationError);
}
