#include "unextend/rational.hpp"

#include <cctype>

namespace unextend {

Rational pow2_inv(unsigned k) {
  return Rational(Nat(1), Nat(1) << k);
}

unsigned ceil_log2(const Nat& n) {
  unsigned s = 0;
  Nat p = 1;
  while (p < n) {
    p <<= 1;
    ++s;
  }
  return s;
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  std::string_view num = text;
  std::string_view den = "1";
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  if (!all_digits(num) || !all_digits(den)) return std::nullopt;
  Nat d{std::string(den)};
  if (d == 0) return std::nullopt;
  Rational q(Nat{std::string(num)}, d);
  return negative ? -q : q;
}

std::optional<Nat> parse_natural(std::string_view text) {
  if (!all_digits(text)) return std::nullopt;
  return Nat{std::string(text)};
}

}  // namespace unextend
