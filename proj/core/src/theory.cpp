#include "currsim/theory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "currsim/seeding.hpp"

namespace currsim::theory {
namespace {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

constexpr double kLnSqrt2Pi = 0.918938533204672741780329736406;
constexpr double kLn2Pi = 1.837877066409345483560659472811;

// log(n!) - log(sqrt(2 pi n) (n/e)^n), the Stirling remainder.
double stirlerr(double n) {
  constexpr double s0 = 1.0 / 12, s1 = 1.0 / 360, s2 = 1.0 / 1260, s3 = 1.0 / 1680, s4 = 1.0 / 1188;
  if (n <= 15.0) return n == 0.0 ? 0.0 : std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n - kLnSqrt2Pi;
  const double nn = n * n;
  if (n > 500) return (s0 - s1 / nn) / n;
  if (n > 80) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// x log(x / np) + np - x without cancellation when x is close to np.
double bd0(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double next = s + ej / (2 * j + 1);
      if (next == s) return next;
      s = next;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

}  // namespace

std::string_view to_string(TrialsConvention c) noexcept {
  return c == TrialsConvention::full_n ? "full_n" : "exact_halves";
}

std::optional<TrialsConvention> parse_trials_convention(std::string_view name) noexcept {
  if (name == "full_n" || name == "full") return TrialsConvention::full_n;
  if (name == "exact_halves" || name == "halves") return TrialsConvention::exact_halves;
  return std::nullopt;
}

std::uint64_t BoundParams::k_n() const noexcept {
  const double x = p_av() * static_cast<double>(n);
  return static_cast<std::uint64_t>(std::floor(x * (1.0 + 1e-12) + 1e-12));
}

std::uint64_t BoundParams::trials_intra() const noexcept {
  return trials == TrialsConvention::full_n ? n : (n + 1) / 2 - 1;
}

std::uint64_t BoundParams::trials_inter() const noexcept {
  return trials == TrialsConvention::full_n ? n : n / 2;
}

void BoundParams::validate() const {
  if (n == 0) throw std::invalid_argument("N must be positive");
  if (trials == TrialsConvention::exact_halves && n < 2) {
    throw std::invalid_argument("exact_halves needs N >= 2");
  }
  check_probability(p_intra, "p_intra");
  check_probability(p_inter, "p_inter");
}

double binom_log_pmf(std::uint64_t n, double p, std::uint64_t k) {
  if (k > n) throw std::invalid_argument("binomial: k must lie in [0, n]");
  check_probability(p, "p");
  if (p == 0.0) return k == 0 ? 0.0 : -INFINITY;
  if (p == 1.0) return k == n ? 0.0 : -INFINITY;
  // Saddle-point form (Loader 2000): accurate to a few ulps even for large n.
  const auto dn = static_cast<double>(n);
  const auto dk = static_cast<double>(k);
  const double q = 1.0 - p;
  if (n == 0) return 0.0;
  if (k == 0) return p < 0.1 ? -bd0(dn, dn * q) - dn * p : dn * std::log1p(-p);
  if (k == n) return q < 0.1 ? -bd0(dn, dn * p) - dn * q : dn * std::log(p);
  const double lc = stirlerr(dn) - stirlerr(dk) - stirlerr(dn - dk) - bd0(dk, dn * p) - bd0(dn - dk, dn * q);
  const double lf = kLn2Pi + std::log(dk) + std::log1p(-dk / dn);
  return lc - 0.5 * lf;
}

double binom_pmf(std::uint64_t n, double p, std::uint64_t k) {
  return std::exp(binom_log_pmf(n, p, k));
}

double binom_cdf(std::uint64_t n, double p, std::int64_t k) {
  check_probability(p, "p");
  if (k < 0) return 0.0;
  if (static_cast<std::uint64_t>(k) >= n) return 1.0;
  CompensatedSum s;
  for (std::uint64_t j = 0; j <= static_cast<std::uint64_t>(k); ++j) s.add(binom_pmf(n, p, j));
  return std::min(1.0, s.value());
}

double binom_sf(std::uint64_t n, double p, std::int64_t k) {
  check_probability(p, "p");
  if (k < 0) return 1.0;
  if (static_cast<std::uint64_t>(k) >= n) return 0.0;
  CompensatedSum s;
  for (std::uint64_t j = static_cast<std::uint64_t>(k) + 1; j <= n; ++j) s.add(binom_pmf(n, p, j));
  return std::min(1.0, s.value());
}

double flip_probability_exact(const BoundParams& params) {
  params.validate();
  const std::uint64_t na = params.trials_intra();
  const std::uint64_t nr = params.trials_inter();
  CompensatedSum total;
  CompensatedSum cdf_a;
  for (std::uint64_t k = 0; k <= nr; ++k) {
    if (k <= na) cdf_a.add(binom_pmf(na, params.p_intra, k));
    total.add(binom_pmf(nr, params.p_inter, k) * std::min(1.0, cdf_a.value()));
  }
  return std::min(1.0, total.value());
}

Rates geometric_rates(double p_intra, double p_inter) {
  check_probability(p_intra, "p_intra");
  check_probability(p_inter, "p_inter");
  if (!(p_inter < p_intra)) {
    throw std::invalid_argument("bound requires p_inter < p_intra");
  }
  const double p_av = 0.5 * (p_intra + p_inter);
  return {std::pow((1.0 - p_intra) / (1.0 - p_av), 1.0 - p_av), std::pow(p_inter / p_av, p_av)};
}

BoundReport union_bound(const BoundParams& params) {
  params.validate();
  const Rates rates = geometric_rates(params.p_intra, params.p_inter);
  BoundReport r;
  r.params = params;
  r.k_n = params.k_n();
  const auto k = static_cast<std::int64_t>(r.k_n);
  r.flip_prob_exact = flip_probability_exact(params);
  r.intra_cdf_at_k = binom_cdf(params.trials_intra(), params.p_intra, k);
  r.inter_tail_at_k = binom_sf(params.trials_inter(), params.p_inter, k);
  r.rho_a = rates.rho_a;
  r.rho_r = rates.rho_r;
  const auto dn = static_cast<double>(params.n);
  r.rho_a_pow_n = std::pow(rates.rho_a, dn);
  r.rho_r_pow_n = std::pow(rates.rho_r, dn);
  r.geometric_bound = r.rho_a_pow_n + r.rho_r_pow_n;
  r.union_bound = dn * r.geometric_bound;
  return r;
}

McEstimate flip_probability_mc(const BoundParams& params, std::uint64_t samples,
                               std::uint64_t seed, unsigned workers) {
  params.validate();
  if (samples == 0) throw std::invalid_argument("samples must be at least 1");
  constexpr std::uint64_t max_shards = 64;
  const std::uint64_t shards = std::min(samples, max_shards);
  std::vector<std::uint64_t> hits(shards, 0);
  const std::uint64_t na = params.trials_intra();
  const std::uint64_t nr = params.trials_inter();

  parallel_for(shards, workers, [&](std::size_t s) {
    const std::uint64_t count = samples / shards + (s < samples % shards ? 1 : 0);
    Rng rng = make_rng(derive_seed(derive_seed(seed, Stream::monte_carlo), s));
    std::uint64_t local = 0;
    for (std::uint64_t t = 0; t < count; ++t) {
      std::uint64_t xa = 0;
      std::uint64_t xr = 0;
      for (std::uint64_t j = 0; j < na; ++j) xa += bernoulli(rng, params.p_intra);
      for (std::uint64_t j = 0; j < nr; ++j) xr += bernoulli(rng, params.p_inter);
      local += (xa <= xr);
    }
    hits[s] = local;
  });

  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  McEstimate out;
  out.samples = samples;
  out.estimate = static_cast<double>(total) / static_cast<double>(samples);
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
  return out;
}

}  // namespace currsim::theory
