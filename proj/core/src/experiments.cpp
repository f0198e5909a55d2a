#include "currsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace currsim {
namespace {

std::size_t count_currencies(const CurrencyState& st) {
  std::vector<std::uint8_t> seen(st.size(), 0);
  std::size_t count = 0;
  for (CurrencyId c : st.currencies) {
    if (!seen[c]) {
      seen[c] = 1;
      ++count;
    }
  }
  return count;
}

}  // namespace

std::vector<Weight> make_weights(const ExperimentConfig& config, const Graph& g,
                                 std::uint64_t seed) {
  std::vector<Weight> w(g.size(), 1);
  switch (config.weighting) {
    case Weighting::none:
      break;
    case Weighting::degree:
      for (AgentId i = 0; i < g.size(); ++i) w[i] = static_cast<Weight>(g.degree(i));
      break;
    case Weighting::poisson: {
      Rng rng = make_rng(seed);
      std::poisson_distribution<Weight> draw(config.effective_poisson_mean());
      for (auto& x : w) x = draw(rng);
      break;
    }
  }
  return w;
}

namespace {

struct MeanAndError {
  double mean = 0.0;
  double se = 0.0;
};

template <class Fn>
MeanAndError mean_and_error(std::span<const RunRecord> records, Fn&& value) {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t m = 0;
  for (const auto& r : records) {
    if (!r.converged) continue;
    const double x = value(r);
    sum += x;
    sum_sq += x * x;
    ++m;
  }
  if (m == 0) return {};
  const double mean = sum / static_cast<double>(m);
  if (m < 2) return {mean, 0.0};
  const double var =
      std::max(0.0, (sum_sq - static_cast<double>(m) * mean * mean) / static_cast<double>(m - 1));
  return {mean, std::sqrt(var / static_cast<double>(m))};
}

}  // namespace

double expected_degree(std::size_t n, const Topology& topology) noexcept {
  const auto dn = static_cast<double>(n);
  if (const auto* one = std::get_if<OneCommunity>(&topology)) return (dn - 1.0) * one->p;
  const auto& two = std::get<TwoCommunity>(topology);
  const auto own = static_cast<double>(community_zero_size(n));
  return (own - 1.0) * two.p_intra + (dn - own) * two.p_inter;
}

RunArtifacts run_on_graph(const ExperimentConfig& config, Graph graph, std::size_t replication,
                          std::size_t point) {
  config.validate();
  if (graph.size() != config.n) throw std::invalid_argument("graph size differs from n");
  const std::uint64_t seed = replication_seed(config.master_seed, point, replication);

  RunArtifacts out;
  out.graph = std::move(graph);
  out.record.replication = replication;
  out.record.graph_seed = derive_seed(seed, Stream::graph);
  const Graph& g = out.graph;

  out.initial_state = config.initial == InitialCondition::distinct
                          ? initial_state_distinct(g)
                          : initial_state_unified_communities(g);
  out.initial_state.weights = make_weights(config, g, derive_seed(seed, Stream::weights));

  Dynamics dynamics(g, config.schedule, derive_seed(seed, Stream::selection),
                    derive_seed(seed, Stream::tie_break));
  out.result = dynamics.run_to_equilibrium(out.initial_state, config.effective_max_steps());

  RunRecord& rec = out.record;
  const CurrencyState& fin = out.result.final_state;
  rec.steps = out.result.steps_executed;
  rec.switches = out.result.switches;
  rec.converged = out.result.converged;
  rec.cycle_detected = out.result.cycle_detected;
  rec.currency_count = count_currencies(fin);
  rec.component_count = connected_components(g).count;
  rec.single_currency = rec.currency_count == 1;
  rec.final_social_utility = social_utility(g, fin);
  double total_weight = 0.0;
  for (Weight w : fin.weights) total_weight += w;
  rec.mean_population_weight = total_weight / static_cast<double>(g.size());
  if (rec.single_currency && config.initial == InitialCondition::distinct) {
    // With a distinct start, currency id == id of the agent that first held it.
    rec.winner_origin_weight = static_cast<double>(fin.weights[fin.currencies.front()]);
  }
  return out;
}

RunArtifacts run_one_detailed(const ExperimentConfig& config, std::size_t replication,
                              std::size_t point) {
  config.validate();
  const std::uint64_t graph_seed =
      derive_seed(replication_seed(config.master_seed, point, replication), Stream::graph);
  Graph g;
  if (const auto* one = std::get_if<OneCommunity>(&config.topology)) {
    g = gen_er(config.n, one->p, graph_seed);
  } else {
    const auto& two = std::get<TwoCommunity>(config.topology);
    g = gen_two_community(config.n, two.p_intra, two.p_inter, graph_seed);
  }
  return run_on_graph(config, std::move(g), replication, point);
}

RunRecord run_one(const ExperimentConfig& config, std::size_t replication, std::size_t point) {
  return run_one_detailed(config, replication, point).record;
}

SweepPoint summarize(std::span<const RunRecord> records, std::string param, double value) {
  SweepPoint s;
  s.param = std::move(param);
  s.value = value;
  s.replications = records.size();
  for (const auto& r : records) {
    if (!r.converged) continue;
    ++s.converged;
    s.single_count += r.single_currency;
  }
  s.nonconverged = s.replications - s.converged;
  if (s.converged > 0) {
    const auto m = static_cast<double>(s.converged);
    s.frac_single = static_cast<double>(s.single_count) / m;
    s.frac_single_se = std::sqrt(s.frac_single * (1.0 - s.frac_single) / m);
  }
  const auto cur = mean_and_error(records, [](const RunRecord& r) {
    return static_cast<double>(r.currency_count);
  });
  const auto comp = mean_and_error(records, [](const RunRecord& r) {
    return static_cast<double>(r.component_count);
  });
  s.mean_currencies = cur.mean;
  s.se_currencies = cur.se;
  s.mean_components = comp.mean;
  s.se_components = comp.se;
  s.mean_currencies_per_component = mean_and_error(records, [](const RunRecord& r) {
    return static_cast<double>(r.currency_count) / static_cast<double>(r.component_count);
  }).mean;
  s.mean_utility = mean_and_error(records, [](const RunRecord& r) {
    return static_cast<double>(r.final_social_utility);
  }).mean;
  s.mean_pop_weight =
      mean_and_error(records, [](const RunRecord& r) { return r.mean_population_weight; }).mean;
  if (auto stats = originator_statistics(records)) s.mean_winner_weight = stats->mean_winner_weight;
  return s;
}

BatchResult run_batch(const ExperimentConfig& config, std::size_t point, unsigned workers,
                      std::string param, double value) {
  config.validate();
  BatchResult out;
  out.records.resize(config.replications);
  parallel_for(config.replications, workers,
               [&](std::size_t r) { out.records[r] = run_one(config, r, point); });
  out.summary = summarize(out.records, std::move(param), value);
  return out;
}

std::string_view to_string(SweepParameter p) noexcept {
  return p == SweepParameter::density_p ? "density_p" : "p_inter";
}

SweepSummary sweep(const ExperimentConfig& base, SweepParameter parameter,
                   std::span<const double> values, unsigned workers) {
  if (!std::is_sorted(values.begin(), values.end())) {
    throw std::invalid_argument("sweep values must be in ascending order");
  }
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("sweep values must lie in [0, 1]");
  }
  const bool one = std::holds_alternative<OneCommunity>(base.topology);
  if (parameter == SweepParameter::density_p && !one) {
    throw std::invalid_argument("density_p sweeps need a one-community configuration");
  }
  if (parameter == SweepParameter::p_inter && one) {
    throw std::invalid_argument("p_inter sweeps need a two-community configuration");
  }

  // Validate every point up front so a bad grid fails before any work.
  std::vector<ExperimentConfig> configs(values.size(), base);
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (parameter == SweepParameter::density_p) {
      configs[k].topology = OneCommunity{values[k]};
    } else {
      std::get<TwoCommunity>(configs[k].topology).p_inter = values[k];
    }
    configs[k].validate();
  }

  SweepSummary out;
  out.parameter = parameter;
  for (std::size_t k = 0; k < values.size(); ++k) {
    auto batch = run_batch(configs[k], k, workers, std::string(to_string(parameter)), values[k]);
    out.points.push_back(std::move(batch.summary));
    out.records.push_back(std::move(batch.records));
  }
  return out;
}

std::optional<OriginatorStats> originator_statistics(std::span<const RunRecord> records) {
  OriginatorStats s;
  double sum_w = 0.0;
  double sum_pop = 0.0;
  double sum_d = 0.0;
  double sum_d2 = 0.0;
  for (const auto& r : records) {
    if (!r.converged || !r.winner_origin_weight) continue;
    const double d = *r.winner_origin_weight - r.mean_population_weight;
    sum_w += *r.winner_origin_weight;
    sum_pop += r.mean_population_weight;
    sum_d += d;
    sum_d2 += d * d;
    ++s.runs;
  }
  if (s.runs == 0) return std::nullopt;
  const auto m = static_cast<double>(s.runs);
  s.mean_winner_weight = sum_w / m;
  s.mean_population_weight = sum_pop / m;
  if (s.runs > 1) {
    const double mean_d = sum_d / m;
    const double var = std::max(0.0, (sum_d2 - m * mean_d * mean_d) / (m - 1.0));
    s.se_difference = std::sqrt(var / m);
  }
  return s;
}

}  // namespace currsim
