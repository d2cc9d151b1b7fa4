#include "pepa/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace pepa {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Parses [sign] digits [. digits] [ (e|E) [sign] digits ] into an exact value.
std::optional<Rational> parse_decimal(const std::string& text) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = (s[0] == '-');
    s.erase(0, 1);
  }

  long exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    std::string expPart = s.substr(epos + 1);
    s.erase(epos);
    bool expNeg = false;
    if (!expPart.empty() && (expPart[0] == '+' || expPart[0] == '-')) {
      expNeg = (expPart[0] == '-');
      expPart.erase(0, 1);
    }
    if (!all_digits(expPart) || expPart.size() > 6) return std::nullopt;
    exp10 = std::strtol(expPart.c_str(), nullptr, 10);
    if (expNeg) exp10 = -exp10;
  }

  std::string intPart = s;
  std::string fracPart;
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    intPart = s.substr(0, dot);
    fracPart = s.substr(dot + 1);
    if (intPart.empty() && fracPart.empty()) return std::nullopt;
    if (intPart.empty()) intPart = "0";
    if (!fracPart.empty() && !all_digits(fracPart)) return std::nullopt;
  }
  if (!all_digits(intPart)) return std::nullopt;

  mpz_class num(intPart + fracPart, 10);
  mpz_class den(1);
  long shift = static_cast<long>(fracPart.size()) - exp10;
  mpz_class ten(10);
  if (shift > 0) {
    mpz_pow_ui(den.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(shift));
  } else if (shift < 0) {
    mpz_class scale;
    mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(-shift));
    num *= scale;
  }
  if (negative) num = -num;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace

std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::string numText = text.substr(0, slash);
    std::string denText = text.substr(slash + 1);
    bool negative = false;
    if (!numText.empty() && (numText[0] == '+' || numText[0] == '-')) {
      negative = (numText[0] == '-');
      numText.erase(0, 1);
    }
    if (!all_digits(numText) || !all_digits(denText)) return std::nullopt;
    mpz_class num(numText, 10), den(denText, 10);
    if (den == 0) return std::nullopt;
    if (negative) num = -num;
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  return parse_decimal(text);
}

std::string format_rational(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double to_double(const Rational& value) { return value.get_d(); }

std::size_t hash_rational(const Rational& value) {
  std::size_t h = std::hash<unsigned long>{}(mpz_get_ui(value.get_num().get_mpz_t()));
  std::size_t h2 = std::hash<unsigned long>{}(mpz_get_ui(value.get_den().get_mpz_t()));
  if (value < 0) h ^= 0x9e3779b97f4a7c15ull;
  return h ^ (h2 + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

}  // namespace pepa
