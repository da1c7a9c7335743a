#include "formkit/ratfunc.hpp"

#include <sstream>

namespace formkit {
namespace {

std::string monomial_string(const std::vector<unsigned>& e,
                            const std::vector<std::string>& names) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!first) os << "*";
    first = false;
    os << names.at(i);
    if (e[i] > 1) os << "^" << e[i];
  }
  return os.str();
}

std::string poly_string(const MPoly<Scalar>& f, const std::vector<std::string>& names) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest lex term first reads more naturally.
  const auto& terms = f.terms();
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono = monomial_string(e, names);
    std::string cs = c.str();
    bool neg = !cs.empty() && cs[0] == '-';
    if (first) {
      os << (neg ? "-" : "");
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    std::string mag = neg ? cs.substr(1) : cs;
    if (mono.empty()) {
      os << mag;
    } else if (mag == "1") {
      os << mono;
    } else {
      os << mag << "*" << mono;
    }
  }
  return os.str();
}

}  // namespace

std::string RatFunc::str(const std::vector<std::string>& var_names) const {
  if (var_names.size() != nvars_) throw std::logic_error("variable name arity mismatch");
  std::string n = poly_string(num_, var_names);
  if (den_.is_constant() && den_.lex_leading().second.is_one()) return n;
  std::string d = poly_string(den_, var_names);
  bool wrap_n = num_.term_count() > 1;
  bool wrap_d = den_.term_count() > 1;
  std::string out = wrap_n ? "(" + n + ")" : n;
  out += "/";
  out += wrap_d ? "(" + d + ")" : d;
  return out;
}

}  // namespace formkit
