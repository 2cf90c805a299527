#include "convbrowse/simulator.hpp"

#include <algorithm>
#include <deque>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <thread>
#include <tuple>

#include "convbrowse/engine.hpp"
#include "convbrowse/errors.hpp"

namespace convbrowse {

GoalSpec GoalSpec::for_item(const CatalogIndex& index, std::string_view item_id) {
  const auto record = index.item_record(item_id);
  GoalSpec goal;
  goal.item = record.item_id;
  for (auto& e : record.entities()) goal.goal_entities.insert(std::move(e));
  return goal;
}

void SeekerState::observe(const Message& message) {
  for (auto& e : message.communicated_entities()) knowledge.insert(std::move(e));
}

bool SeekerState::satisfied() const {
  return std::includes(knowledge.begin(), knowledge.end(), goal.goal_entities.begin(),
                       goal.goal_entities.end());
}

Action seeker_policy(const SeekerState& state, const Message& message) {
  if (message.is_final()) throw ContractError("seeker_policy on a final message");

  std::vector<EntityRef> wanted;
  for (const auto& e : message.offered_entities) {
    if (state.goal.goal_entities.contains(e) && !state.selected.contains(e)) wanted.push_back(e);
  }
  if (!wanted.empty()) return Action::select(std::move(wanted));

  if (message.attribute_in_focus) {
    for (const auto& e : state.goal.goal_entities) {
      if (e.attribute == *message.attribute_in_focus && !state.knowledge.contains(e)) {
        return Action::more();
      }
    }
  }
  return Action::skip();
}

SimResult simulate(const CatalogIndex& index, const SelectionConfig& config,
                   const GoalSpec& goal) {
  if (!index.find_item(goal.item)) throw ContractError("goal item '" + goal.item + "' not in catalog");
  const DialogueEngine engine(index, config);

  SimResult result;
  result.goal = goal;
  SeekerState seeker{{}, goal, {}};

  auto [state, message] = engine.start_session();
  seeker.observe(message);
  while (!state.done()) {
    const auto action = seeker_policy(seeker, message);
    if (action.kind == ActionKind::select) {
      seeker.selected.insert(action.entities.begin(), action.entities.end());
    }
    result.action_trace.push_back(action);
    message = engine.apply_action(state, action);
    seeker.observe(message);
  }
  result.turns = state.turn;
  result.success = seeker.satisfied();
  result.transcript = std::move(state.transcript);
  return result;
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::size_t sweep_goal(std::uint64_t seed, std::size_t l, std::size_t run,
                       std::size_t item_count) {
  if (item_count == 0) throw ContractError("sweep_goal on an empty catalog");
  const auto stream = splitmix64(splitmix64(splitmix64(seed) ^ l) ^ run);
  std::mt19937_64 rng(stream);
  // Rejection sampling keeps the draw uniform and independent of the
  // standard library's distribution implementation.
  const std::uint64_t n = item_count;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

SweepReport sweep(const CatalogIndex& index, const std::vector<std::size_t>& l_values,
                  std::size_t runs, std::uint64_t seed, const SweepOptions& options) {
  if (runs < 1) throw ContractError("sweep needs at least one run");
  if (l_values.empty()) throw ContractError("sweep needs at least one value of l");

  struct Job {
    std::size_t row;
    std::size_t run;
  };
  std::vector<Job> jobs;
  for (std::size_t r = 0; r < l_values.size(); ++r) {
    for (std::size_t run = 0; run < runs; ++run) jobs.push_back({r, run});
  }
  std::vector<SimResult> results(jobs.size());

  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t j = begin; j < jobs.size(); j += stride) {
      auto config = options.base;
      config.l = l_values[jobs[j].row];
      const auto item = sweep_goal(seed, config.l, jobs[j].run, index.item_count());
      results[j] = simulate(index, config, GoalSpec::for_item(index, index.item_id(
                                                                  static_cast<ItemIndex>(item))));
      if (!options.on_result) results[j].transcript.clear();
    }
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }

  SweepReport report;
  report.seed = seed;
  report.runs = runs;
  for (std::size_t r = 0; r < l_values.size(); ++r) {
    SweepRow row;
    row.l = l_values[r];
    row.runs = runs;
    std::size_t total = 0;
    std::size_t ok = 0;
    row.min_turns = std::numeric_limits<std::size_t>::max();
    for (std::size_t run = 0; run < runs; ++run) {
      const auto& res = results[r * runs + run];
      if (!res.success) {
        ++row.failures;
        continue;
      }
      ++ok;
      total += res.turns;
      row.min_turns = std::min(row.min_turns, res.turns);
      row.max_turns = std::max(row.max_turns, res.turns);
    }
    if (ok == 0) {
      row.min_turns = 0;
    } else {
      row.mean_turns = static_cast<double>(total) / static_cast<double>(ok);
    }
    report.rows.push_back(row);
  }

  if (options.on_result) {
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      options.on_result(l_values[jobs[j].row], jobs[j].run, results[j]);
    }
  }
  return report;
}

void write_sweep_table(std::ostream& out, const SweepReport& report) {
  out << "l\truns\tfailures\tmin\tmean\tmax\n";
  for (const auto& row : report.rows) {
    out << row.l << '\t' << row.runs << '\t' << row.failures << '\t' << row.min_turns << '\t'
        << std::fixed << std::setprecision(2) << row.mean_turns << '\t' << row.max_turns << '\n';
  }
}

std::vector<std::size_t> parse_l_values(std::string_view text) {
  auto number = [&](std::string_view s) {
    std::size_t v = 0;
    if (s.empty()) throw ConfigurationError("bad l value list '" + std::string(text) + "'");
    for (char c : s) {
      if (c < '0' || c > '9') throw ConfigurationError("bad l value list '" + std::string(text) + "'");
      v = v * 10 + static_cast<std::size_t>(c - '0');
    }
    if (v == 0) throw ConfigurationError("l must be at least 1");
    return v;
  };
  std::vector<std::size_t> out;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const auto lo = number(text.substr(0, dots));
    const auto hi = number(text.substr(dots + 2));
    if (hi < lo) throw ConfigurationError("empty l range '" + std::string(text) + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    out.push_back(number(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------

std::size_t brute_force_min_turns(const CatalogIndex& index, const SelectionConfig& config,
                                  const GoalSpec& goal) {
  if (index.item_count() > 10) {
    throw ContractError("brute_force_min_turns is limited to catalogs of at most 10 items");
  }
  const DialogueEngine engine(index, config);

  struct Node {
    SessionState state;
    std::set<EntityRef> known;
  };
  using Key = std::tuple<CandidateSet, std::set<std::string>, std::optional<Focus>, Phase,
                         std::set<EntityRef>>;
  auto key_of = [](const Node& n) {
    return Key{n.state.candidates, n.state.exhausted, n.state.focus, n.state.phase, n.known};
  };
  auto learn = [&](Node& n, const Message& m) {
    for (auto& e : m.communicated_entities()) {
      if (goal.goal_entities.contains(e)) n.known.insert(std::move(e));
    }
  };
  auto satisfied = [&](const Node& n) { return n.known.size() == goal.goal_entities.size(); };

  auto [start_state, start_message] = engine.start_session();
  Node start{std::move(start_state), {}};
  learn(start, start_message);
  if (satisfied(start)) return start.state.turn;

  std::set<Key> seen{key_of(start)};
  std::deque<Node> frontier;
  frontier.push_back(std::move(start));

  while (!frontier.empty()) {
    Node node = std::move(frontier.front());
    frontier.pop_front();
    if (node.state.done()) continue;

    const auto offers = node.state.latest_message().offered_entities;
    std::vector<Action> actions{Action::skip(), Action::more(), Action::restart()};
    const std::size_t subsets = std::size_t{1} << offers.size();
    for (std::size_t mask = 1; mask < subsets; ++mask) {
      std::vector<EntityRef> pick;
      for (std::size_t i = 0; i < offers.size(); ++i) {
        if (mask & (std::size_t{1} << i)) pick.push_back(offers[i]);
      }
      actions.push_back(Action::select(pick));
      actions.push_back(Action::prune(std::move(pick)));
    }

    for (const auto& action : actions) {
      Node next = node;
      const auto reply = engine.apply_action(next.state, action);
      // Only the latest message is needed to validate the next action.
      next.state.transcript.erase(next.state.transcript.begin(),
                                  next.state.transcript.end() - 1);
      learn(next, reply);
      if (satisfied(next)) return next.state.turn;
      if (seen.insert(key_of(next)).second) frontier.push_back(std::move(next));
    }
  }
  throw ContractError("goal '" + goal.item + "' is unreachable within max_turns");
}

}  // namespace convbrowse
