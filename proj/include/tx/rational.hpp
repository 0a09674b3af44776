#ifndef TX_RATIONAL_HPP
#define TX_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace tx {

// Exact coefficient/exponent field. cpp_rational keeps values reduced with a
// positive denominator, which is exactly the invariant we need.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

struct TxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : TxError {
  using TxError::TxError;
};
struct BudgetExceeded : TxError {
  using TxError::TxError;
};
struct UnsupportedFragment : TxError {
  using TxError::TxError;
};

inline int sgn(const Rational& a) {
  return a.sign();
}

inline bool is_integer(const Rational& a) {
  return denominator(a) == 1;
}

inline bool is_natural(const Rational& a) {
  return is_integer(a) && a >= 0;
}

inline Integer floor_int(const Rational& a) {
  Integer n = numerator(a), d = denominator(a);
  Integer q = n / d;
  if (n < 0 && q * d != n) --q;
  return q;
}

// Fractional part in [0, 1).
inline Rational frac_part(const Rational& a) {
  return a - Rational(floor_int(a));
}

inline Rational pow_int(const Rational& a, long e) {
  if (e == 0) return 1;
  Rational base = e > 0 ? a : Rational(1) / a;
  long n = e > 0 ? e : -e;
  Rational r = 1;
  while (n > 0) {
    if (n & 1) r *= base;
    base *= base;
    n >>= 1;
  }
  return r;
}

// Generalized binomial coefficient a(a-1)...(a-k+1)/k!.
inline Rational binom(const Rational& a, long k) {
  if (k < 0) throw DomainError("binom: negative k");
  Rational r = 1;
  for (long i = 0; i < k; ++i) {
    r *= (a - i);
    r /= (i + 1);
  }
  return r;
}

// Coefficients c_j with d/dX binom(X,n) = sum_{j=0}^{n-1} c_j binom(X,j),
// c_j = (-1)^{n-j-1} / (n-j).
inline std::vector<Rational> binom_derivative_coeffs(long n) {
  if (n < 1) throw DomainError("binom_derivative_coeffs: n must be >= 1");
  std::vector<Rational> c;
  c.reserve(static_cast<size_t>(n));
  for (long j = 0; j < n; ++j) {
    Rational v = Rational(1) / Rational(n - j);
    if ((n - j - 1) % 2 != 0) v = -v;
    c.push_back(v);
  }
  return c;
}

inline std::string to_string(const Rational& a) {
  return a.str();
}

// Parses "p" or "p/q" with optional leading '-'. Throws DomainError otherwise.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw DomainError("empty rational literal");
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw DomainError("bad rational literal: " + s);
  }
}

}  // namespace tx

#endif
