#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "currsim/dynamics.hpp"

namespace currsim {
namespace {

template <class T>
std::vector<T> read_tagged_row(std::istream& in, const std::string& expected) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  std::istringstream row(line);
  std::string tag;
  if (!(row >> tag) || tag != expected) throw FormatError("state snapshot: expected '" + expected + "' line");
  std::vector<T> values;
  long long v = 0;
  while (row >> v) {
    if (v < 0) throw FormatError("state snapshot: negative value in '" + expected + "'");
    values.push_back(static_cast<T>(v));
  }
  if (!row.eof()) throw FormatError("state snapshot: malformed '" + expected + "' line");
  return values;
}

}  // namespace

void write_state(std::ostream& out, const CurrencyState& st) {
  out << "currencies";
  for (auto c : st.currencies) out << ' ' << c;
  out << "\nweights";
  for (auto w : st.weights) out << ' ' << w;
  out << '\n';
}

CurrencyState read_state(std::istream& in) {
  CurrencyState st;
  st.currencies = read_tagged_row<CurrencyId>(in, "currencies");
  st.weights = read_tagged_row<Weight>(in, "weights");
  if (st.currencies.size() != st.weights.size()) {
    throw FormatError("state snapshot: currencies and weights differ in length");
  }
  return st;
}

}  // namespace currsim
