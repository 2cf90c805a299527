#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "convbrowse/catalog.hpp"
#include "convbrowse/dialogue.hpp"

namespace convbrowse {

/// The Seeker's latent information goal: one item and all of its entities.
struct GoalSpec {
  std::string item;
  std::set<EntityRef> goal_entities;

  static GoalSpec for_item(const CatalogIndex& index, std::string_view item_id);
};

/// What the simulated Seeker knows. Perception is lossless: every entity
/// of every agent message is added to the knowledge set.
struct SeekerState {
  std::set<EntityRef> knowledge;
  GoalSpec goal;
  /// Entities this Seeker has already selected.
  std::set<EntityRef> selected;

  void observe(const Message& message);
  bool satisfied() const;
};

/// Rational navigation: select every offered goal entity not selected
/// before; otherwise page with `more` while the focused attribute still
/// hides an unseen goal value; otherwise `skip`. Never prunes or restarts.
Action seeker_policy(const SeekerState& state, const Message& message);

struct SimResult {
  GoalSpec goal;
  /// Number of agent messages.
  std::size_t turns = 0;
  bool success = false;
  std::vector<Action> action_trace;
  std::vector<TranscriptEntry> transcript;
};

SimResult simulate(const CatalogIndex& index, const SelectionConfig& config, const GoalSpec& goal);

struct SweepRow {
  std::size_t l = 0;
  std::size_t runs = 0;
  std::size_t failures = 0;
  /// Over successful runs only; zero when every run failed.
  std::size_t min_turns = 0;
  double mean_turns = 0.0;
  std::size_t max_turns = 0;

  bool operator==(const SweepRow&) const = default;
};

struct SweepReport {
  std::uint64_t seed = 0;
  std::size_t runs = 0;
  std::vector<SweepRow> rows;

  bool operator==(const SweepReport&) const = default;
};

struct SweepOptions {
  /// max_turns / linear_threshold come from here; l is overridden per row.
  SelectionConfig base;
  /// 0 = hardware concurrency. Results do not depend on the thread count.
  unsigned threads = 1;
  /// Called once per run, serially and in (l, run) order, after the sweep.
  std::function<void(std::size_t l, std::size_t run, const SimResult&)> on_result;
};

/// Goal index for run `run` at bound `l`; a pure function of its inputs.
std::size_t sweep_goal(std::uint64_t seed, std::size_t l, std::size_t run, std::size_t item_count);

SweepReport sweep(const CatalogIndex& index, const std::vector<std::size_t>& l_values,
                  std::size_t runs, std::uint64_t seed, const SweepOptions& options = {});

/// Tab-separated: l, runs, failures, min, mean, max.
void write_sweep_table(std::ostream& out, const SweepReport& report);

/// Parses "3..8" or "3,4,6" into bound values.
std::vector<std::size_t> parse_l_values(std::string_view text);

/// Fewest agent messages after which the goal is known, over every legal
/// action sequence (breadth-first). Only for catalogs of at most 10 items;
/// throws ContractError beyond that.
std::size_t brute_force_min_turns(const CatalogIndex& index, const SelectionConfig& config,
                                  const GoalSpec& goal);

}  // namespace convbrowse
