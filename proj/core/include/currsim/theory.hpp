#pragma once

// Large-n persistence of two pre-unified communities.
//
// A given agent has X_a intra-community and X_r inter-community neighbours,
// independent binomials. It can defect only if X_a <= X_r. With
// p_av = (p_intra + p_inter) / 2 and k_N = floor(p_av N):
//
//   P(X_a <= X_r) <= phi_a(k_N) + (1 - phi_r(k_N)) <= rho_a^N + rho_r^N
//   rho_a = ((1 - p_intra) / (1 - p_av))^(1 - p_av)
//   rho_r = (p_inter / p_av)^p_av
//
// and a union bound over the N agents gives N (rho_a^N + rho_r^N) -> 0.
// The decay rates rho_a, rho_r are unrelated to per-agent weights.

#include <cstdint>
#include <optional>
#include <string_view>

#include "currsim/parallel.hpp"

namespace currsim::theory {

/// Number of Bernoulli trials behind X_a and X_r.
///  full_n      both counts use N trials (the convention of the bound)
///  exact_halves the counts an agent of community 0 really has in an N-agent
///               two-community graph: ceil(N/2) - 1 intra, floor(N/2) inter
enum class TrialsConvention { full_n, exact_halves };

std::string_view to_string(TrialsConvention c) noexcept;
std::optional<TrialsConvention> parse_trials_convention(std::string_view name) noexcept;

struct BoundParams {
  std::uint64_t n = 0;
  double p_intra = 0.0;
  double p_inter = 0.0;
  TrialsConvention trials = TrialsConvention::full_n;

  double p_av() const noexcept { return 0.5 * (p_intra + p_inter); }
  /// floor(p_av * n), robust to the representation error of decimal inputs.
  std::uint64_t k_n() const noexcept;
  std::uint64_t trials_intra() const noexcept;
  std::uint64_t trials_inter() const noexcept;

  /// Throws std::invalid_argument for n = 0 (n < 2 with exact_halves) or a
  /// probability outside [0, 1].
  void validate() const;
};

/// C(n,k) p^k (1-p)^(n-k), evaluated in log space. Throws for k > n.
double binom_pmf(std::uint64_t n, double p, std::uint64_t k);
double binom_log_pmf(std::uint64_t n, double p, std::uint64_t k);

/// P(X <= k); 0 for k < 0 and 1 for k >= n.
double binom_cdf(std::uint64_t n, double p, std::int64_t k);

/// P(X > k), summed directly over the upper tail so small tails keep their
/// relative precision.
double binom_sf(std::uint64_t n, double p, std::int64_t k);

/// P(X_a <= X_r) = sum_k P(X_r = k) phi_a(k). Defined for all parameters.
double flip_probability_exact(const BoundParams& params);

struct Rates {
  double rho_a = 1.0;
  double rho_r = 1.0;
};

/// Requires 0 <= p_inter < p_intra <= 1 (at equality both rates are 1 and the
/// bound is vacuous).
Rates geometric_rates(double p_intra, double p_inter);

struct BoundReport {
  BoundParams params;
  std::uint64_t k_n = 0;
  double flip_prob_exact = 0.0;
  double intra_cdf_at_k = 0.0;   ///< phi_a(k_N)
  double inter_tail_at_k = 0.0;  ///< 1 - phi_r(k_N)
  double rho_a = 1.0;
  double rho_r = 1.0;
  double rho_a_pow_n = 1.0;
  double rho_r_pow_n = 1.0;
  double geometric_bound = 0.0;  ///< rho_a^N + rho_r^N
  double union_bound = 0.0;      ///< N (rho_a^N + rho_r^N)
};

/// Assembles every term of the bound chain. Same preconditions as
/// geometric_rates.
BoundReport union_bound(const BoundParams& params);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

/// Monte Carlo estimate of P(X_a <= X_r) by drawing the individual links.
/// The sample budget is split into fixed shards with derived seeds, so the
/// result does not depend on `workers`.
McEstimate flip_probability_mc(const BoundParams& params, std::uint64_t samples,
                               std::uint64_t seed, unsigned workers = default_workers());

}  // namespace currsim::theory
