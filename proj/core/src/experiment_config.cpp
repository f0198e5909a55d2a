#include <charconv>
#include <cstdlib>
#include <istream>
#include <stdexcept>
#include <string>

#include "currsim/experiments.hpp"

namespace currsim {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw std::invalid_argument("invalid value '" + std::string(value) + "' for '" +
                              std::string(key) + "'");
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) bad_value(key, value);
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  const std::string copy(value);
  char* end = nullptr;
  const double out = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size()) bad_value(key, value);
  return out;
}

TwoCommunity& as_two(ExperimentConfig& config) {
  if (!std::holds_alternative<TwoCommunity>(config.topology)) config.topology = TwoCommunity{};
  return std::get<TwoCommunity>(config.topology);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

std::string_view to_string(InitialCondition c) noexcept {
  return c == InitialCondition::distinct ? "distinct" : "unified";
}

std::string_view to_string(Weighting w) noexcept {
  switch (w) {
    case Weighting::none: return "none";
    case Weighting::degree: return "degree";
    case Weighting::poisson: return "poisson";
  }
  return "unknown";
}

std::optional<InitialCondition> parse_initial_condition(std::string_view name) noexcept {
  if (name == "distinct") return InitialCondition::distinct;
  if (name == "unified" || name == "unified_communities") return InitialCondition::unified_communities;
  return std::nullopt;
}

std::optional<Weighting> parse_weighting(std::string_view name) noexcept {
  if (name == "none") return Weighting::none;
  if (name == "degree") return Weighting::degree;
  if (name == "poisson") return Weighting::poisson;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (replications == 0) throw std::invalid_argument("replications must be at least 1");
  if (const auto* one = std::get_if<OneCommunity>(&topology)) {
    if (!is_probability(one->p)) throw std::invalid_argument("p must lie in [0, 1]");
    if (initial == InitialCondition::unified_communities) {
      throw std::invalid_argument("unified start requires a two-community topology");
    }
  } else {
    const auto& two = std::get<TwoCommunity>(topology);
    if (!is_probability(two.p_intra) || !is_probability(two.p_inter)) {
      throw std::invalid_argument("p_intra and p_inter must lie in [0, 1]");
    }
    if (n < 2) throw std::invalid_argument("two-community topology needs n >= 2");
  }
  if (weighting == Weighting::poisson) {
    if (!(poisson_mean >= 0.0)) throw std::invalid_argument("poisson_mean must be positive");
    if (!(effective_poisson_mean() > 0.0)) {
      throw std::invalid_argument("poisson weights need a positive mean (expected degree is 0)");
    }
  }
}

std::uint64_t ExperimentConfig::effective_max_steps() const noexcept {
  return max_steps > 0 ? max_steps : default_max_steps(n);
}

double ExperimentConfig::effective_poisson_mean() const noexcept {
  return poisson_mean > 0.0 ? poisson_mean : expected_degree(n, topology);
}

void apply_config_entry(ExperimentConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "n") {
    config.n = parse_unsigned(key, value);
  } else if (key == "p") {
    config.topology = OneCommunity{parse_real(key, value)};
  } else if (key == "p_intra") {
    as_two(config).p_intra = parse_real(key, value);
  } else if (key == "p_inter") {
    as_two(config).p_inter = parse_real(key, value);
  } else if (key == "initial") {
    auto v = parse_initial_condition(value);
    if (!v) bad_value(key, value);
    config.initial = *v;
  } else if (key == "schedule") {
    auto v = parse_schedule(value);
    if (!v) bad_value(key, value);
    config.schedule = *v;
  } else if (key == "weighting") {
    auto v = parse_weighting(value);
    if (!v) bad_value(key, value);
    config.weighting = *v;
  } else if (key == "poisson_mean") {
    config.poisson_mean = parse_real(key, value);
  } else if (key == "replications") {
    config.replications = parse_unsigned(key, value);
  } else if (key == "seed") {
    config.master_seed = parse_unsigned(key, value);
  } else if (key == "max_steps") {
    config.max_steps = parse_unsigned(key, value);
  } else {
    throw std::invalid_argument("unknown configuration key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    }
    apply_config_entry(base, view.substr(0, eq), view.substr(eq + 1));
  }
  return base;
}

}  // namespace currsim
