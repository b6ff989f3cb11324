#include "mvtsp/arith.hpp"

#include <cctype>

namespace mvtsp {

namespace {

bool valid_integer_text(std::string_view text) {
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  if (i == text.size()) return false;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  return true;
}

std::string strip_plus(std::string_view text) {
  if (!text.empty() && text[0] == '+') text.remove_prefix(1);
  return std::string(text);
}

}  // namespace

Integer parse_integer(std::string_view text) {
  if (!valid_integer_text(text)) {
    throw StructuralError("not an integer: '" + std::string(text) + "'");
  }
  return Integer(strip_plus(text), 10);
}

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = text.substr(slash + 1);
  if (!valid_integer_text(num) || !valid_integer_text(den)) {
    throw StructuralError("not a rational: '" + std::string(text) + "'");
  }
  Integer d(strip_plus(den), 10);
  if (d == 0) throw StructuralError("zero denominator: '" + std::string(text) + "'");
  Rational q(Integer(strip_plus(num), 10), d);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string format_integer(const Integer& value) { return value.get_str(); }

Integer floor_of(const Rational& value) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return out;
}

bool is_integral(const Rational& value) { return value.get_den() == 1; }

}  // namespace mvtsp
