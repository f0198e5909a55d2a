#include "currsim/dynamics.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace currsim {
namespace {

void check_agent(const Graph& g, AgentId i) {
  if (i >= g.size()) {
    throw std::out_of_range("agent id " + std::to_string(i) + " out of range for n = " +
                            std::to_string(g.size()));
  }
}

}  // namespace

bool CurrencyState::unit_weights() const noexcept {
  return std::all_of(weights.begin(), weights.end(), [](Weight w) { return w == 1; });
}

std::string_view to_string(Schedule s) noexcept {
  switch (s) {
    case Schedule::random_sequential: return "random_sequential";
    case Schedule::fixed_sequential: return "fixed_sequential";
    case Schedule::synchronous: return "synchronous";
  }
  return "unknown";
}

std::optional<Schedule> parse_schedule(std::string_view name) noexcept {
  if (name == "random_sequential" || name == "random") return Schedule::random_sequential;
  if (name == "fixed_sequential" || name == "fixed") return Schedule::fixed_sequential;
  if (name == "synchronous" || name == "sync") return Schedule::synchronous;
  return std::nullopt;
}

void validate_state(const Graph& g, const CurrencyState& st) {
  if (st.currencies.size() != g.size() || st.weights.size() != g.size()) {
    throw std::invalid_argument("state size does not match graph size");
  }
  for (CurrencyId c : st.currencies) {
    if (c >= g.size()) throw std::invalid_argument("currency id out of range");
  }
}

CurrencyState initial_state_distinct(const Graph& g) {
  CurrencyState st;
  st.currencies.resize(g.size());
  for (CurrencyId i = 0; i < g.size(); ++i) st.currencies[i] = i;
  st.weights.assign(g.size(), 1);
  return st;
}

CurrencyState initial_state_unified_communities(const Graph& g) {
  if (!g.has_communities()) {
    throw std::invalid_argument("unified start requires a graph with community labels");
  }
  constexpr auto unset = static_cast<CurrencyId>(-1);
  std::array<CurrencyId, 2> founder{unset, unset};
  CurrencyState st;
  st.currencies.resize(g.size());
  for (AgentId i = 0; i < g.size(); ++i) {
    auto& f = founder[g.community(i)];
    if (f == unset) f = i;
    st.currencies[i] = f;
  }
  st.weights.assign(g.size(), 1);
  return st;
}

Utility agent_utility(const Graph& g, const CurrencyState& st, AgentId i) {
  check_agent(g, i);
  Utility u = 0;
  for (AgentId j : g.neighbors(i)) {
    if (st.currencies[j] != st.currencies[i]) u -= st.weights[j];
  }
  return u;
}

Utility social_utility(const Graph& g, const CurrencyState& st) {
  Utility total = 0;
  for (AgentId i = 0; i < g.size(); ++i) total += agent_utility(g, st, i);
  return total;
}

Utility weighted_potential(const Graph& g, const CurrencyState& st) {
  Utility phi = 0;
  for (auto [i, j] : g.edges()) {
    if (st.currencies[i] != st.currencies[j]) {
      phi -= static_cast<Utility>(st.weights[i]) * static_cast<Utility>(st.weights[j]);
    }
  }
  return phi;
}

std::map<CurrencyId, Utility> neighbor_tally(const Graph& g, const CurrencyState& st, AgentId i) {
  check_agent(g, i);
  std::map<CurrencyId, Utility> tally;
  for (AgentId j : g.neighbors(i)) tally[st.currencies[j]] += st.weights[j];
  return tally;
}

Utility switch_utility_delta(const Graph& g, const CurrencyState& st, AgentId i,
                             CurrencyId new_currency) {
  check_agent(g, i);
  if (new_currency >= g.size()) throw std::out_of_range("currency id out of range");
  const CurrencyId old = st.currencies[i];
  const Utility own = st.weights[i];
  Utility delta = 0;
  for (AgentId j : g.neighbors(i)) {
    const CurrencyId c = st.currencies[j];
    const Utility pair = own + st.weights[j];
    if (c == new_currency) delta += pair;
    if (c == old) delta -= pair;
  }
  return delta;
}

// --- MajorityRule -----------------------------------------------------------

MajorityRule::MajorityRule(std::size_t n) : tally_(n, 0), present_(n, 0) {}

void MajorityRule::clear() {
  for (CurrencyId c : touched_) {
    present_[c] = 0;
    tally_[c] = 0;
  }
  touched_.clear();
}

std::pair<Utility, Utility> MajorityRule::fill(const Graph& g, const CurrencyState& st, AgentId i) {
  clear();
  for (AgentId j : g.neighbors(i)) {
    const CurrencyId c = st.currencies[j];
    if (!present_[c]) {
      present_[c] = 1;
      touched_.push_back(c);
    }
    tally_[c] += st.weights[j];
  }
  Utility best = 0;
  for (CurrencyId c : touched_) best = std::max(best, tally_[c]);
  const CurrencyId own = st.currencies[i];
  return {best, present_[own] ? tally_[own] : 0};
}

Choice MajorityRule::choose(const Graph& g, const CurrencyState& st, AgentId i, Rng& tie_break) {
  last_random_ = false;
  const auto [best, own] = fill(g, st, i);
  if (best <= own) return {st.currencies[i], false};
  best_.clear();
  for (CurrencyId c : touched_) {
    if (tally_[c] == best) best_.push_back(c);
  }
  if (best_.size() == 1) return {best_.front(), true};
  last_random_ = true;
  return {best_[uniform_below(tie_break, best_.size())], true};
}

bool MajorityRule::would_switch(const Graph& g, const CurrencyState& st, AgentId i) {
  const auto [best, own] = fill(g, st, i);
  return best > own;
}

Choice choose_currency(const Graph& g, const CurrencyState& st, AgentId i, Rng& tie_break) {
  check_agent(g, i);
  MajorityRule rule(g.size());
  return rule.choose(g, st, i, tie_break);
}

bool is_equilibrium(const Graph& g, const CurrencyState& st) {
  MajorityRule rule(g.size());
  for (AgentId i = 0; i < g.size(); ++i) {
    if (rule.would_switch(g, st, i)) return false;
  }
  return true;
}

// --- Dynamics ---------------------------------------------------------------

std::uint64_t default_max_steps(std::size_t n) noexcept {
  return 100ULL * n * n;
}

Dynamics::Dynamics(const Graph& g, Schedule schedule, std::uint64_t selection_seed,
                   std::uint64_t tie_seed)
    : graph_(&g),
      schedule_(schedule),
      selection_(make_rng(selection_seed)),
      tie_break_(make_rng(tie_seed)),
      rule_(g.size()) {}

StepOutcome Dynamics::update_agent(CurrencyState& st, AgentId i, std::vector<SwitchEvent>* events) {
  ++steps_;
  StepOutcome out{1, 0, false};
  const Choice choice = rule_.choose(*graph_, st, i, tie_break_);
  out.random_tie = rule_.last_choice_random();
  if (!choice.switched) return out;
  if (events) {
    events->push_back({steps_, i, st.currencies[i], choice.currency,
                       switch_utility_delta(*graph_, st, i, choice.currency)});
  }
  st.currencies[i] = choice.currency;
  out.switches = 1;
  return out;
}

StepOutcome Dynamics::sweep(CurrencyState& st, std::vector<SwitchEvent>* events) {
  const std::size_t n = graph_->size();
  StepOutcome out;
  pending_.clear();
  for (AgentId i = 0; i < n; ++i) {
    const Choice choice = rule_.choose(*graph_, st, i, tie_break_);
    out.random_tie = out.random_tie || rule_.last_choice_random();
    if (choice.switched) pending_.emplace_back(i, choice.currency);
  }
  if (events) {
    for (auto [i, c] : pending_) {
      events->push_back({steps_ + i + 1, i, st.currencies[i], c,
                         switch_utility_delta(*graph_, st, i, c)});
    }
  }
  for (auto [i, c] : pending_) st.currencies[i] = c;
  steps_ += n;
  out.updates = n;
  out.switches = pending_.size();
  return out;
}

StepOutcome Dynamics::step(CurrencyState& st, std::vector<SwitchEvent>* events) {
  const auto n = static_cast<AgentId>(graph_->size());
  switch (schedule_) {
    case Schedule::random_sequential:
      return update_agent(st, static_cast<AgentId>(uniform_below(selection_, n)), events);
    case Schedule::fixed_sequential: {
      const AgentId i = cursor_;
      cursor_ = (cursor_ + 1) % n;
      return update_agent(st, i, events);
    }
    case Schedule::synchronous:
      return sweep(st, events);
  }
  return {};
}

RunResult Dynamics::run_to_equilibrium(CurrencyState st, std::uint64_t max_steps) {
  validate_state(*graph_, st);
  if (max_steps == 0) throw std::invalid_argument("max_steps must be at least 1");
  return schedule_ == Schedule::synchronous ? run_synchronous(std::move(st), max_steps)
                                            : run_sequential(std::move(st), max_steps);
}

// Stability of every agent is tracked incrementally: a switch by i can only
// change the tallies seen by i and its neighbours. The run therefore stops at
// the exact update that completes the equilibrium.
RunResult Dynamics::run_sequential(CurrencyState st, std::uint64_t max_steps) {
  const Graph& g = *graph_;
  RunResult result;
  Utility utility = social_utility(g, st);
  result.utility_trace.push_back({0, utility});

  std::vector<std::uint8_t> unstable(g.size(), 0);
  std::size_t unstable_count = 0;
  for (AgentId i = 0; i < g.size(); ++i) {
    unstable[i] = rule_.would_switch(g, st, i);
    unstable_count += unstable[i];
  }
  auto refresh = [&](AgentId v) {
    const std::uint8_t now = rule_.would_switch(g, st, v);
    unstable_count = unstable_count - unstable[v] + now;
    unstable[v] = now;
  };

  std::vector<SwitchEvent> events;
  while (unstable_count > 0 && result.steps_executed < max_steps) {
    events.clear();
    step(st, &events);
    ++result.steps_executed;
    if (events.empty()) continue;
    const SwitchEvent& ev = events.front();
    utility += ev.delta;
    ++result.switches;
    result.last_switch_step = result.steps_executed;
    result.utility_trace.push_back({result.steps_executed, utility});
    refresh(ev.agent);
    for (AgentId j : g.neighbors(ev.agent)) refresh(j);
  }

  result.converged = unstable_count == 0;
  if (result.converged && !is_equilibrium(g, st)) {
    throw std::logic_error("stability bookkeeping diverged from a full equilibrium scan");
  }
  result.final_state = std::move(st);
  return result;
}

// A state repeating with period two is a genuine cycle only if neither sweep
// involved a random tie-break; otherwise the next draw may leave it.
RunResult Dynamics::run_synchronous(CurrencyState st, std::uint64_t max_steps) {
  const Graph& g = *graph_;
  RunResult result;
  result.utility_trace.push_back({0, social_utility(g, st)});
  if (is_equilibrium(g, st)) {
    result.converged = true;
    result.final_state = std::move(st);
    return result;
  }

  std::optional<CurrencyState> two_back;
  std::uint64_t two_back_hash = 0;
  CurrencyState one_back = st;
  std::uint64_t one_back_hash = state_hash(st);
  bool prev_random = true;

  while (result.steps_executed < max_steps) {
    const StepOutcome out = step(st, nullptr);
    result.steps_executed += out.updates;
    result.switches += out.switches;
    if (out.switches == 0) {
      result.converged = true;
      break;
    }
    result.last_switch_step = result.steps_executed;
    result.utility_trace.push_back({result.steps_executed, social_utility(g, st)});
    if (is_equilibrium(g, st)) {
      result.converged = true;
      break;
    }
    const std::uint64_t h = state_hash(st);
    if (two_back && h == two_back_hash && !out.random_tie && !prev_random && st == *two_back) {
      result.cycle_detected = true;
      break;
    }
    two_back = std::move(one_back);
    two_back_hash = one_back_hash;
    one_back = st;
    one_back_hash = h;
    prev_random = out.random_tie;
  }
  result.final_state = std::move(st);
  return result;
}

RunResult run_to_equilibrium(const Graph& g, CurrencyState st0, Schedule schedule,
                             std::uint64_t selection_seed, std::uint64_t tie_seed,
                             std::uint64_t max_steps) {
  Dynamics dyn(g, schedule, selection_seed, tie_seed);
  return dyn.run_to_equilibrium(std::move(st0), max_steps);
}

std::uint64_t state_hash(const CurrencyState& st) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL ^ st.currencies.size();
  for (CurrencyId c : st.currencies) h = mix64(h ^ c);
  return h;
}

}  // namespace currsim
