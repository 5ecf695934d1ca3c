#include "csg/complex_literal.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "csg/errors.hpp"

namespace csg {
namespace {

[[noreturn]] void fail(std::string_view text) {
  throw ConfigError("bad complex literal '" + std::string(text) +
                    "': expected a, bi or a+bi with decimal a, b");
}

// Parses one signed decimal starting at pos; returns value and advances
// pos. An empty mantissa immediately followed by 'i' means 1 or -1.
double parse_part(std::string_view s, std::size_t& pos, bool& unit_only) {
  std::size_t start = pos;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
  std::size_t digits_from = pos;
  while (pos < s.size() &&
         (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
          s[pos] == 'e' || s[pos] == 'E' ||
          ((s[pos] == '+' || s[pos] == '-') && pos > digits_from &&
           (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
    ++pos;
  unit_only = (pos == digits_from);
  if (unit_only) return (start < s.size() && s[start] == '-') ? -1.0 : 1.0;
  // from_chars accepts '-' but not a leading '+'
  std::size_t from = (s[start] == '+') ? start + 1 : start;
  double v = 0;
  auto [p, ec] = std::from_chars(s.data() + from, s.data() + pos, v);
  if (ec != std::errc() || p != s.data() + pos) fail(s);
  return v;
}

} // namespace

std::complex<double> parse_complex(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  if (s.empty()) fail(text);

  std::size_t pos = 0;
  bool unit_only = false;
  double first = parse_part(s, pos, unit_only);

  if (pos < s.size() && s[pos] == 'i') {
    ++pos;
    if (pos != s.size()) fail(text);
    return {0.0, first};
  }
  if (unit_only) fail(text);
  if (pos == s.size()) return {first, 0.0};

  if (s[pos] != '+' && s[pos] != '-') fail(text);
  double second = parse_part(s, pos, unit_only);
  if (pos >= s.size() || s[pos] != 'i') fail(text);
  ++pos;
  if (pos != s.size()) fail(text);
  return {first, second};
}

std::string format_double(double x) {
  if (x == 0.0) x = 0.0; // normalize -0
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, p);
}

std::string format_complex(std::complex<double> z) {
  if (z.imag() == 0.0) return format_double(z.real());
  if (z.real() == 0.0) return format_double(z.imag()) + "i";
  std::string s = format_double(z.real());
  if (z.imag() >= 0.0) s += "+";
  s += format_double(z.imag());
  s += "i";
  return s;
}

} // namespace csg
