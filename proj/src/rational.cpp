#include "convint/rational.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace ci {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  *this = from128(num, den);
}

Rational Rational::from128(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("Rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n > kMax || n < -kMax || d > kMax) throw RationalOverflow("Rational: result exceeds 64-bit range");
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return Rational(std::stoll(text.substr(0, slash))) / Rational(std::stoll(text.substr(slash + 1)));
  }
  std::size_t pos = 0;
  bool neg = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) neg = text[pos++] == '-';
  __int128 n = 0, d = 1;
  bool frac = false, any = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.' && !frac) {
      frac = true;
      continue;
    }
    if (c < '0' || c > '9') throw std::invalid_argument("Rational::parse: bad number '" + text + "'");
    any = true;
    n = n * 10 + (c - '0');
    if (frac) d *= 10;
    if (n > kMax || d > kMax) throw RationalOverflow("Rational::parse: too many digits");
  }
  if (!any) throw std::invalid_argument("Rational::parse: bad number '" + text + "'");
  return from128(neg ? -n : n, d);
}

Rational Rational::approximate(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw std::domain_error("Rational::approximate: non-finite input");
  // convergents h/k of the continued fraction of x
  __int128 h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rem = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(rem);
    if (std::abs(a) > 9e18) break;
    const __int128 ai = static_cast<__int128>(a);
    const __int128 h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double f = rem - a;
    if (f < 1e-15) break;
    rem = 1.0 / f;
  }
  return from128(h1, k1);
}

std::string Rational::str() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

Rational Rational::operator-() const { return from128(-static_cast<__int128>(num_), den_); }

Rational Rational::operator+(const Rational& o) const {
  return from128(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                 static_cast<__int128>(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
  return from128(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
  return from128(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
}

int Rational::compare(const Rational& o) const {
  const __int128 l = static_cast<__int128>(num_) * o.den_, r = static_cast<__int128>(o.num_) * den_;
  return l < r ? -1 : (l > r ? 1 : 0);
}

std::int64_t Rational::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  os << r.num();
  if (r.den() != 1) os << '/' << r.den();
  return os;
}

}  // namespace ci
