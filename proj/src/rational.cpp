#include "mmkit/rational.hpp"

#include <cctype>

#include "mmkit/errors.hpp"

namespace mmkit {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// "123", "1.25" -> exact rational; no exponent form.
Rat parse_unsigned_decimal(std::string_view s, std::string_view whole) {
  auto dot = s.find('.');
  if (dot == std::string_view::npos) {
    if (!all_digits(s)) {
      throw validation_error(errc::parse_error,
                             "not a rational: '" + std::string(whole) + "'");
    }
    return Rat(Int(std::string(s)));
  }
  std::string_view int_part = s.substr(0, dot);
  std::string_view frac_part = s.substr(dot + 1);
  if (!all_digits(frac_part) || (!int_part.empty() && !all_digits(int_part))) {
    throw validation_error(errc::parse_error,
                           "not a rational: '" + std::string(whole) + "'");
  }
  Int num = int_part.empty() ? Int(0) : Int(std::string(int_part));
  Int den = 1;
  for (char c : frac_part) {
    num = num * 10 + (c - '0');
    den *= 10;
  }
  return Rat(num, den);
}

}  // namespace

Rat parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  if (s.empty()) {
    throw validation_error(errc::parse_error, "empty rational literal");
  }
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rat value;
  auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    value = parse_unsigned_decimal(s, text);
  } else {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw validation_error(errc::parse_error,
                             "not a rational: '" + std::string(text) + "'");
    }
    Int d{std::string(den)};
    if (d == 0) {
      throw validation_error(errc::parse_error,
                             "zero denominator: '" + std::string(text) + "'");
    }
    value = Rat(Int(std::string(num)), d);
  }
  return negative ? Rat(-value) : value;
}

std::string rat_to_string(const Rat& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

std::vector<Rat> parse_rational_list(std::string_view text) {
  std::vector<Rat> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    std::string_view item = comma == std::string_view::npos
                                ? text.substr(start)
                                : text.substr(start, comma - start);
    out.push_back(parse_rational(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace mmkit
