#pragma once

// Seeded, replicated experiment campaigns and their aggregation.
//
// Replication r of sweep point k uses replication_seed(master, k, r); the
// graph, agent selection, tie-break and weight streams are derived from it.
// Adding sweep points or replications never changes existing ones, and
// results do not depend on the number of workers.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "currsim/dynamics.hpp"
#include "currsim/parallel.hpp"

namespace currsim {

struct OneCommunity {
  double p = 0.0;
  bool operator==(const OneCommunity&) const = default;
};

struct TwoCommunity {
  double p_intra = 0.0;
  double p_inter = 0.0;
  bool operator==(const TwoCommunity&) const = default;
};

using Topology = std::variant<OneCommunity, TwoCommunity>;

enum class InitialCondition { distinct, unified_communities };
enum class Weighting { none, degree, poisson };

std::string_view to_string(InitialCondition c) noexcept;
std::string_view to_string(Weighting w) noexcept;
std::optional<InitialCondition> parse_initial_condition(std::string_view name) noexcept;
std::optional<Weighting> parse_weighting(std::string_view name) noexcept;

struct ExperimentConfig {
  std::size_t n = 100;
  Topology topology = OneCommunity{0.05};
  InitialCondition initial = InitialCondition::distinct;
  Schedule schedule = Schedule::random_sequential;
  Weighting weighting = Weighting::none;
  double poisson_mean = 0.0;  ///< 0 selects the expected degree of the topology
  std::size_t replications = 1000;
  std::uint64_t master_seed = 0;
  std::uint64_t max_steps = 0;  ///< 0 selects default_max_steps(n)

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
  std::uint64_t effective_max_steps() const noexcept;
  double effective_poisson_mean() const noexcept;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Expected degree of an agent (of community 0 for two communities).
double expected_degree(std::size_t n, const Topology& topology) noexcept;

/// Reads a flat `key = value` file (`#` starts a comment). Keys: n, p,
/// p_intra, p_inter, initial, schedule, weighting, poisson_mean,
/// replications, seed, max_steps. Giving p_intra or p_inter selects the
/// two-community topology. Starts from `base`.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});

/// Applies one key/value pair; throws std::invalid_argument on unknown keys
/// or malformed values.
void apply_config_entry(ExperimentConfig& config, std::string_view key, std::string_view value);

struct RunRecord {
  std::size_t replication = 0;
  std::uint64_t graph_seed = 0;
  std::uint64_t steps = 0;
  std::uint64_t switches = 0;
  bool converged = false;
  bool cycle_detected = false;
  std::size_t currency_count = 0;
  std::size_t component_count = 0;
  bool single_currency = false;
  Utility final_social_utility = 0;
  /// Weight of the agent whose initial currency took over the whole economy.
  /// Set only for single-currency outcomes of a distinct start.
  std::optional<double> winner_origin_weight;
  double mean_population_weight = 0.0;

  bool operator==(const RunRecord&) const = default;
};

/// Everything run_one builds, kept for callers that want to inspect the run.
struct RunArtifacts {
  Graph graph;
  CurrencyState initial_state;
  RunResult result;
  RunRecord record;
};

/// Per-agent weights for `config.weighting` on graph g: unit, degree, or
/// Poisson draws from `seed`.
std::vector<Weight> make_weights(const ExperimentConfig& config, const Graph& g,
                                 std::uint64_t seed);

/// Runs replication `replication` on a caller-supplied graph, using the same
/// seed derivation as run_one for everything except the graph.
RunArtifacts run_on_graph(const ExperimentConfig& config, Graph graph, std::size_t replication,
                          std::size_t point = 0);

RunArtifacts run_one_detailed(const ExperimentConfig& config, std::size_t replication,
                              std::size_t point = 0);
RunRecord run_one(const ExperimentConfig& config, std::size_t replication, std::size_t point = 0);

/// Aggregates over one parameter value. Means are taken over converged runs
/// only; non-converged runs are counted separately.
struct SweepPoint {
  std::string param;
  double value = 0.0;
  std::size_t replications = 0;
  std::size_t converged = 0;
  std::size_t nonconverged = 0;
  std::size_t single_count = 0;
  double frac_single = 0.0;
  double frac_single_se = 0.0;
  double mean_currencies = 0.0;
  double se_currencies = 0.0;
  double mean_components = 0.0;
  double se_components = 0.0;
  double mean_currencies_per_component = 0.0;
  double mean_utility = 0.0;
  std::optional<double> mean_winner_weight;
  double mean_pop_weight = 0.0;

  bool operator==(const SweepPoint&) const = default;
};

SweepPoint summarize(std::span<const RunRecord> records, std::string param, double value);

struct BatchResult {
  std::vector<RunRecord> records;  ///< sorted by replication index
  SweepPoint summary;
};

BatchResult run_batch(const ExperimentConfig& config, std::size_t point = 0,
                      unsigned workers = default_workers(), std::string param = "none",
                      double value = 0.0);

enum class SweepParameter { density_p, p_inter };
std::string_view to_string(SweepParameter p) noexcept;

struct SweepSummary {
  SweepParameter parameter = SweepParameter::density_p;
  std::vector<SweepPoint> points;
  std::vector<std::vector<RunRecord>> records;  ///< per point
};

/// One batch per value, point index = position in `values`. Values must be
/// ascending and in [0, 1]; density_p needs a one-community base config and
/// p_inter a two-community one.
SweepSummary sweep(const ExperimentConfig& base, SweepParameter parameter,
                   std::span<const double> values, unsigned workers = default_workers());

struct OriginatorStats {
  std::size_t runs = 0;                 ///< single-currency converged runs used
  double mean_winner_weight = 0.0;
  double mean_population_weight = 0.0;  ///< over the same runs
  /// Standard error of the per-run difference winner - population mean.
  double se_difference = 0.0;
};

/// nullopt when no run ended on a single currency.
std::optional<OriginatorStats> originator_statistics(std::span<const RunRecord> records);

inline constexpr std::string_view kSweepCsvHeader =
    "param,value,replications,converged,frac_single,mean_currencies,mean_components,"
    "mean_utility,mean_winner_weight,mean_pop_weight";

/// Writes kSweepCsvHeader then one row per point. Doubles use the shortest
/// round-trip form; a missing winner weight is written as `nan`.
void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points);

/// Parses the CSV written by write_sweep_csv (columns not in the CSV stay at
/// their defaults). Throws FormatError on a header mismatch.
std::vector<SweepPoint> read_sweep_csv(std::istream& in);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

}  // namespace currsim
