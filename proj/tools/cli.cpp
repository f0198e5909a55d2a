#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "currsim/dynamics.hpp"
#include "currsim/experiments.hpp"
#include "currsim/graph.hpp"
#include "currsim/theory.hpp"

namespace currsim::cli {
namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void with_output(const std::string& path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  write(file);
  if (!file) throw IoError("failed writing '" + path + "'");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(x)) {
    throw std::invalid_argument("malformed number '" + s + "' in grid");
  }
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

// Flags shared by the subcommands that run dynamics.
struct ExperimentFlags {
  std::size_t n = 100;
  double p = 0.0;
  double p_intra = 0.0;
  double p_inter = 0.0;
  std::string initial;
  std::string schedule;
  std::string weighting;
  double poisson_mean = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 0;
  std::size_t replications = 0;
  std::string config_path;

  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f, bool replications, bool density,
                          bool two_community) {
  f.opts["n"] = cmd->add_option("--n", f.n, "Number of agents");
  if (density) f.opts["p"] = cmd->add_option("--p", f.p, "Link probability (one community)");
  if (two_community) {
    f.opts["p_intra"] = cmd->add_option("--p-intra", f.p_intra, "Same-community link probability");
    f.opts["p_inter"] = cmd->add_option("--p-inter", f.p_inter, "Cross-community link probability");
    f.opts["initial"] = cmd->add_option("--initial", f.initial, "distinct | unified");
  }
  f.opts["schedule"] =
      cmd->add_option("--schedule", f.schedule, "random_sequential | fixed_sequential | synchronous");
  f.opts["weighting"] = cmd->add_option("--weighting", f.weighting, "none | degree | poisson");
  f.opts["poisson_mean"] =
      cmd->add_option("--poisson-mean", f.poisson_mean, "Mean of Poisson weights (default: expected degree)");
  f.opts["seed"] = cmd->add_option("--seed", f.seed, "Master seed (default: $SIM_SEED or 0)");
  f.opts["max_steps"] = cmd->add_option("--max-steps", f.max_steps, "Cap on elementary updates (default 100 n^2)");
  if (replications) {
    f.opts["replications"] = cmd->add_option("--replications", f.replications, "Replications per grid point");
  }
  f.opts["config"] = cmd->add_option("--config", f.config_path, "Flat key=value configuration file");
}

ExperimentConfig build_config(const ExperimentFlags& f, ExperimentConfig cfg) {
  if (const char* env = std::getenv("SIM_SEED"); env && *env) {
    apply_config_entry(cfg, "seed", env);
  }
  if (!f.config_path.empty()) {
    auto in = open_input(f.config_path);
    cfg = parse_config(in, cfg);
  }
  auto set = [&](const char* key, const std::string& value) { apply_config_entry(cfg, key, value); };
  if (f.given("n")) cfg.n = f.n;
  if (f.given("p")) cfg.topology = OneCommunity{f.p};
  if (f.given("p_intra")) set("p_intra", format_double(f.p_intra));
  if (f.given("p_inter")) set("p_inter", format_double(f.p_inter));
  if (f.given("initial")) set("initial", f.initial);
  if (f.given("schedule")) set("schedule", f.schedule);
  if (f.given("weighting")) set("weighting", f.weighting);
  if (f.given("poisson_mean")) cfg.poisson_mean = f.poisson_mean;
  if (f.given("seed")) cfg.master_seed = f.seed;
  if (f.given("max_steps")) cfg.max_steps = f.max_steps;
  if (f.given("replications")) cfg.replications = f.replications;
  return cfg;
}

// --- generate ---------------------------------------------------------------

struct GenerateFlags {
  ExperimentFlags exp;
  std::string out;
};

void cmd_generate(const GenerateFlags& f, std::ostream& out) {
  if (f.exp.given("p") && (f.exp.given("p_intra") || f.exp.given("p_inter"))) {
    throw std::invalid_argument("--p cannot be combined with --p-intra/--p-inter");
  }
  if (f.exp.given("p_intra") != f.exp.given("p_inter")) {
    throw std::invalid_argument("--p-intra and --p-inter must be given together");
  }
  ExperimentConfig cfg = build_config(f.exp, {});
  cfg.validate();
  const std::uint64_t seed = cfg.master_seed;
  Graph g;
  if (const auto* one = std::get_if<OneCommunity>(&cfg.topology)) {
    if (!f.exp.given("p") && f.exp.config_path.empty()) throw std::invalid_argument("--p is required");
    g = gen_er(cfg.n, one->p, seed);
  } else {
    const auto& two = std::get<TwoCommunity>(cfg.topology);
    g = gen_two_community(cfg.n, two.p_intra, two.p_inter, seed);
  }
  with_output(f.out, out, [&](std::ostream& os) { write_edge_list(os, g); });
}

// --- run --------------------------------------------------------------------

struct RunFlags {
  ExperimentFlags exp;
  std::size_t replication = 0;
  std::string graph_path;
  std::string trace_path;
  std::string state_path;
  std::string out;
};

void cmd_run(const RunFlags& f, std::ostream& out) {
  ExperimentConfig cfg = build_config(f.exp, {});
  cfg.replications = 1;
  RunArtifacts run;
  if (!f.graph_path.empty()) {
    auto in = open_input(f.graph_path);
    Graph g = read_edge_list(in);
    cfg.n = g.size();
    // The fixture fixes the topology; keep the config consistent with it.
    if (g.has_communities() && std::holds_alternative<OneCommunity>(cfg.topology)) {
      cfg.topology = TwoCommunity{};
    }
    if (cfg.weighting == Weighting::poisson && cfg.poisson_mean <= 0.0) {
      cfg.poisson_mean = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.size());
    }
    run = run_on_graph(cfg, std::move(g), f.replication);
  } else {
    run = run_one_detailed(cfg, f.replication);
  }
  const RunRecord& r = run.record;
  with_output(f.out, out, [&](std::ostream& os) {
    os << "n " << cfg.n << '\n'
       << "schedule " << to_string(cfg.schedule) << '\n'
       << "seed " << cfg.master_seed << '\n'
       << "replication " << f.replication << '\n'
       << "edges " << run.graph.edge_count() << '\n'
       << "steps " << r.steps << '\n'
       << "last_switch_step " << run.result.last_switch_step << '\n'
       << "switches " << r.switches << '\n'
       << "converged " << (r.converged ? "true" : "false") << '\n'
       << "cycle_detected " << (r.cycle_detected ? "true" : "false") << '\n'
       << "currencies " << r.currency_count << '\n'
       << "components " << r.component_count << '\n'
       << "social_utility " << r.final_social_utility << '\n';
  });
  if (!f.trace_path.empty()) {
    with_output(f.trace_path, out, [&](std::ostream& os) {
      os << "step,utility\n";
      for (const auto& t : run.result.utility_trace) os << t.step << ',' << t.utility << '\n';
    });
  }
  if (!f.state_path.empty()) {
    with_output(f.state_path, out, [&](std::ostream& os) { write_state(os, run.result.final_state); });
  }
}

// --- sweeps -----------------------------------------------------------------

struct SweepFlags {
  ExperimentFlags exp;
  std::string values;
  std::string range;
  unsigned workers = default_workers();
  std::string out;
};

std::vector<double> sweep_grid(const SweepFlags& f) {
  if (f.values.empty() == f.range.empty()) {
    throw std::invalid_argument("give exactly one of --values or --range");
  }
  if (!f.range.empty() && f.range.find(':') == std::string::npos) {
    throw std::invalid_argument("--range expects lo:hi:step");
  }
  return parse_real_grid(f.values.empty() ? f.range : f.values);
}

void cmd_sweep(const SweepFlags& f, SweepParameter parameter, std::ostream& out) {
  const std::vector<double> grid = sweep_grid(f);
  ExperimentConfig base;
  if (parameter == SweepParameter::density_p) {
    base.topology = OneCommunity{0.0};
  } else {
    base.topology = TwoCommunity{0.3, 0.0};
  }
  base = build_config(f.exp, base);
  if (parameter == SweepParameter::p_inter && !std::holds_alternative<TwoCommunity>(base.topology)) {
    throw std::invalid_argument("sweep-two needs --p-intra");
  }
  const SweepSummary summary = sweep(base, parameter, grid, f.workers);
  with_output(f.out, out, [&](std::ostream& os) { write_sweep_csv(os, summary.points); });
}

// --- bounds -----------------------------------------------------------------

struct BoundsFlags {
  double p_intra = 0.0;
  double p_inter = 0.0;
  std::string n_grid;
  std::string trials = "full_n";
  std::string out;
};

void cmd_bounds(const BoundsFlags& f, std::ostream& out) {
  const auto trials = theory::parse_trials_convention(f.trials);
  if (!trials) throw std::invalid_argument("--trials must be full_n or exact_halves");
  theory::geometric_rates(f.p_intra, f.p_inter);  // validates before any output
  const auto grid = parse_count_grid(f.n_grid);
  std::vector<theory::BoundReport> rows;
  for (auto n : grid) rows.push_back(theory::union_bound({n, f.p_intra, f.p_inter, *trials}));
  with_output(f.out, out, [&](std::ostream& os) {
    os << "N,p_intra,p_inter,p_av,k_N,flip_exact,rho_a,rho_r,geom_bound,union_bound\n";
    for (const auto& r : rows) {
      os << r.params.n << ',' << format_double(r.params.p_intra) << ','
         << format_double(r.params.p_inter) << ',' << format_double(r.params.p_av()) << ','
         << r.k_n << ',' << format_double(r.flip_prob_exact) << ',' << format_double(r.rho_a) << ','
         << format_double(r.rho_r) << ',' << format_double(r.geometric_bound) << ','
         << format_double(r.union_bound) << '\n';
    }
  });
}

}  // namespace

std::vector<double> parse_real_grid(const std::string& spec) {
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw std::invalid_argument("range must be lo:hi:step");
    const double lo = parse_real(parts[0]);
    const double hi = parse_real(parts[1]);
    const double step = parse_real(parts[2]);
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("range needs step > 0 and hi >= lo");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      // Snap to 12 decimals so 0.1 * 3 prints as 0.3.
      grid.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
  } else {
    for (const auto& part : split(spec, ',')) grid.push_back(parse_real(part));
  }
  if (grid.empty()) throw std::invalid_argument("empty grid");
  return grid;
}

std::vector<unsigned long long> parse_count_grid(const std::string& spec) {
  std::vector<unsigned long long> grid;
  for (double x : parse_real_grid(spec)) {
    if (x < 1.0 || x != std::floor(x)) throw std::invalid_argument("N grid needs positive integers");
    grid.push_back(static_cast<unsigned long long>(x));
  }
  return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Currency competition on random graphs"};
  app.require_subcommand(1);

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "Write a random graph as an edge list");
  add_experiment_flags(generate, gen.exp, false, true, true);
  generate->add_option("--out", gen.out, "Output file (default: stdout)");

  RunFlags runf;
  auto* run_cmd = app.add_subcommand("run", "Run the dynamics once and report the outcome");
  add_experiment_flags(run_cmd, runf.exp, false, true, true);
  run_cmd->add_option("--replication", runf.replication, "Replication index (selects derived seeds)");
  run_cmd->add_option("--graph", runf.graph_path, "Use this edge-list file instead of generating");
  run_cmd->add_option("--trace", runf.trace_path, "Write the utility trace (step,utility) here");
  run_cmd->add_option("--state-out", runf.state_path, "Write the final state snapshot here");
  run_cmd->add_option("--out", runf.out, "Report file (default: stdout)");

  SweepFlags one;
  auto* sweep_one = app.add_subcommand("sweep-one", "Sweep the link density of one community");
  add_experiment_flags(sweep_one, one.exp, true, false, false);
  sweep_one->add_option("--values", one.values, "Comma-separated p values");
  sweep_one->add_option("--range", one.range, "lo:hi:step");
  sweep_one->add_option("--workers", one.workers, "Worker threads");
  sweep_one->add_option("--out", one.out, "CSV file (default: stdout)");

  SweepFlags two;
  auto* sweep_two = app.add_subcommand("sweep-two", "Sweep p_inter of a two-community graph");
  add_experiment_flags(sweep_two, two.exp, true, false, true);
  sweep_two->add_option("--values", two.values, "Comma-separated p_inter values");
  sweep_two->add_option("--range", two.range, "lo:hi:step");
  sweep_two->add_option("--workers", two.workers, "Worker threads");
  sweep_two->add_option("--out", two.out, "CSV file (default: stdout)");

  BoundsFlags bf;
  auto* bounds = app.add_subcommand("bounds", "Flip probability and union bound over an N grid");
  bounds->add_option("--p-intra", bf.p_intra, "Same-community link probability")->required();
  bounds->add_option("--p-inter", bf.p_inter, "Cross-community link probability")->required();
  bounds->add_option("--n", bf.n_grid, "N values: lo:hi:step or comma list")->required();
  bounds->add_option("--trials", bf.trials, "full_n | exact_halves");
  bounds->add_option("--out", bf.out, "CSV file (default: stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (generate->parsed()) cmd_generate(gen, out);
    if (run_cmd->parsed()) cmd_run(runf, out);
    if (sweep_one->parsed()) cmd_sweep(one, SweepParameter::density_p, out);
    if (sweep_two->parsed()) cmd_sweep(two, SweepParameter::p_inter, out);
    if (bounds->parsed()) cmd_bounds(bf, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace currsim::cli
