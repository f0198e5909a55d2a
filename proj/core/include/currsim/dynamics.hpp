#pragma once

// Currency-adoption dynamics: agent state, utilities, the majority imitation
// rule, update schedules and equilibrium detection.
//
// Conventions
//  * Agent i pays rho_j for every neighbour j holding a different currency, so
//    its utility is U_i = -sum_{j in V(i), s_j != s_i} rho_j (rho = 1 when
//    unweighted).
//  * Social utility is the plain sum of agent utilities. Unweighted, that is
//    -2 x (number of discordant edges).
//  * A "step" is one elementary agent update. A synchronous sweep counts as n
//    steps.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "currsim/graph.hpp"
#include "currsim/seeding.hpp"

namespace currsim {

using CurrencyId = std::uint32_t;
using Weight = std::uint32_t;
using Utility = std::int64_t;

struct CurrencyState {
  std::vector<CurrencyId> currencies;
  std::vector<Weight> weights;

  std::size_t size() const noexcept { return currencies.size(); }
  bool unit_weights() const noexcept;
  bool operator==(const CurrencyState&) const = default;
};

enum class Schedule { random_sequential, fixed_sequential, synchronous };

std::string_view to_string(Schedule s) noexcept;
std::optional<Schedule> parse_schedule(std::string_view name) noexcept;

/// Throws std::invalid_argument unless `st` fits `g` (sizes match, currency
/// ids lie in [0, n)).
void validate_state(const Graph& g, const CurrencyState& st);

/// Every agent holds its own currency (s_i = i), unit weights.
CurrencyState initial_state_distinct(const Graph& g);

/// Each community already shares one currency: the lowest agent index of that
/// community. Requires community labels.
CurrencyState initial_state_unified_communities(const Graph& g);

Utility agent_utility(const Graph& g, const CurrencyState& st, AgentId i);
Utility social_utility(const Graph& g, const CurrencyState& st);

/// -sum over discordant edges of rho_i * rho_j. Strictly increases at every
/// switch made by an agent with positive weight, so it is the potential that
/// guarantees termination of weighted sequential dynamics. Equals
/// social_utility / 2 for unit weights.
Utility weighted_potential(const Graph& g, const CurrencyState& st);

/// Total neighbour weight per currency held around agent i.
std::map<CurrencyId, Utility> neighbor_tally(const Graph& g, const CurrencyState& st, AgentId i);

/// Exact change of social utility if agent i switched to `new_currency`,
/// evaluated from i's neighbourhood only.
Utility switch_utility_delta(const Graph& g, const CurrencyState& st, AgentId i,
                             CurrencyId new_currency);

struct Choice {
  CurrencyId currency = 0;
  bool switched = false;
};

/// Majority rule with a reusable dense tally. The agent keeps its currency if
/// it is isolated or its currency already attains the maximal tally; otherwise
/// it draws uniformly among the maximal currencies. A currency held by no
/// neighbour has tally 0, so an agent never switches without a strict gain.
class MajorityRule {
 public:
  explicit MajorityRule(std::size_t n);

  Choice choose(const Graph& g, const CurrencyState& st, AgentId i, Rng& tie_break);

  /// True iff choose() would switch. Draws no random numbers.
  bool would_switch(const Graph& g, const CurrencyState& st, AgentId i);

  /// Whether the last choose() had to break a tie at random.
  bool last_choice_random() const noexcept { return last_random_; }

 private:
  // Fills tally for i's neighbourhood; returns (max tally, own tally).
  std::pair<Utility, Utility> fill(const Graph& g, const CurrencyState& st, AgentId i);
  void clear();

  std::vector<Utility> tally_;
  std::vector<std::uint8_t> present_;
  std::vector<CurrencyId> touched_;
  std::vector<CurrencyId> best_;
  bool last_random_ = false;
};

/// Convenience wrapper allocating its own scratch.
Choice choose_currency(const Graph& g, const CurrencyState& st, AgentId i, Rng& tie_break);

/// True iff no agent would switch. Isolated agents never block equilibrium.
bool is_equilibrium(const Graph& g, const CurrencyState& st);

struct SwitchEvent {
  std::uint64_t step = 0;  ///< 1-based elementary update index
  AgentId agent = 0;
  CurrencyId from = 0;
  CurrencyId to = 0;
  Utility delta = 0;  ///< switch_utility_delta against the pre-step state
};

struct StepOutcome {
  std::uint64_t updates = 0;
  std::uint64_t switches = 0;
  bool random_tie = false;
};

struct TracePoint {
  std::uint64_t step = 0;
  Utility utility = 0;
};

struct RunResult {
  std::uint64_t steps_executed = 0;
  std::uint64_t switches = 0;
  std::uint64_t last_switch_step = 0;
  std::vector<TracePoint> utility_trace;  ///< initial value, then one entry per switching step
  CurrencyState final_state;
  bool converged = false;
  bool cycle_detected = false;
};

/// Default cap on elementary updates: 100 n^2.
std::uint64_t default_max_steps(std::size_t n) noexcept;

/// Drives one schedule over one graph. Agent selection and tie-breaking use
/// separate streams so trajectories are reproducible from the two seeds.
class Dynamics {
 public:
  Dynamics(const Graph& g, Schedule schedule, std::uint64_t selection_seed,
           std::uint64_t tie_seed);

  /// One elementary update (sequential schedules) or one full sweep
  /// (synchronous). Mutates `st` in place; appends switches to `events`.
  StepOutcome step(CurrencyState& st, std::vector<SwitchEvent>* events = nullptr);

  /// Iterates until equilibrium, max_steps elementary updates, or (synchronous
  /// only) a deterministic 2-cycle.
  RunResult run_to_equilibrium(CurrencyState st, std::uint64_t max_steps);

  Schedule schedule() const noexcept { return schedule_; }
  std::uint64_t steps_taken() const noexcept { return steps_; }

 private:
  StepOutcome update_agent(CurrencyState& st, AgentId i, std::vector<SwitchEvent>* events);
  StepOutcome sweep(CurrencyState& st, std::vector<SwitchEvent>* events);
  RunResult run_sequential(CurrencyState st, std::uint64_t max_steps);
  RunResult run_synchronous(CurrencyState st, std::uint64_t max_steps);

  const Graph* graph_;
  Schedule schedule_;
  Rng selection_;
  Rng tie_break_;
  MajorityRule rule_;
  AgentId cursor_ = 0;
  std::uint64_t steps_ = 0;
  std::vector<std::pair<AgentId, CurrencyId>> pending_;
};

RunResult run_to_equilibrium(const Graph& g, CurrencyState st0, Schedule schedule,
                             std::uint64_t selection_seed, std::uint64_t tie_seed,
                             std::uint64_t max_steps);

/// 64-bit hash of the currency vector.
std::uint64_t state_hash(const CurrencyState& st) noexcept;

// Snapshot format:
//   currencies <c_0 ... c_{n-1}>
//   weights <w_0 ... w_{n-1}>
void write_state(std::ostream& out, const CurrencyState& st);
CurrencyState read_state(std::istream& in);

}  // namespace currsim
