#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "currsim/experiments.hpp"

namespace currsim {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw FormatError("sweep csv: bad number '" + s + "'");
  return x;
}

std::size_t to_count(const std::string& s) {
  std::size_t x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw FormatError("sweep csv: bad count '" + s + "'");
  return x;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points) {
  out << kSweepCsvHeader << '\n';
  for (const auto& s : points) {
    out << s.param << ',' << format_double(s.value) << ',' << s.replications << ',' << s.converged
        << ',' << format_double(s.frac_single) << ',' << format_double(s.mean_currencies) << ','
        << format_double(s.mean_components) << ',' << format_double(s.mean_utility) << ','
        << (s.mean_winner_weight ? format_double(*s.mean_winner_weight) : "nan") << ','
        << format_double(s.mean_pop_weight) << '\n';
  }
}

std::vector<SweepPoint> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader) {
    throw FormatError("sweep csv: unexpected header");
  }
  std::vector<SweepPoint> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 10) throw FormatError("sweep csv: expected 10 fields");
    SweepPoint s;
    s.param = f[0];
    s.value = to_double(f[1]);
    s.replications = to_count(f[2]);
    s.converged = to_count(f[3]);
    s.nonconverged = s.replications - s.converged;
    s.frac_single = to_double(f[4]);
    s.mean_currencies = to_double(f[5]);
    s.mean_components = to_double(f[6]);
    s.mean_utility = to_double(f[7]);
    if (const double w = to_double(f[8]); !std::isnan(w)) s.mean_winner_weight = w;
    s.mean_pop_weight = to_double(f[9]);
    points.push_back(std::move(s));
  }
  return points;
}

}  // namespace currsim
