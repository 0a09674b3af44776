#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "tx/context.hpp"
#include "tx/rational.hpp"

using namespace tx;

TEST_CASE("binom base cases") {
  CHECK(binom(Rational(7, 3), 0) == 1);
  CHECK(binom(Rational(1, 2), 2) == Rational(-1, 8));
  CHECK(binom(Rational(3), 4) == 0);
  CHECK(binom(Rational(-1), 5) == -1);
  CHECK_THROWS_AS(binom(Rational(1), -1), DomainError);
}

TEST_CASE("binom recurrence binom(a,k+1) = binom(a,k)(a-k)/(k+1)") {
  testing::Rng rng(11);
  for (int it = 0; it < 50; ++it) {
    Rational a = rng.rational(12, 7);
    long k = rng.uniform(0, 20);
    CHECK(binom(a, k + 1) == binom(a, k) * (a - k) / (k + 1));
  }
}

TEST_CASE("Vandermonde convolution") {
  testing::Rng rng(12);
  for (int it = 0; it < 40; ++it) {
    Rational a = rng.rational(9, 5);
    Rational b = rng.rational(9, 5);
    long n = rng.uniform(0, 8);
    Rational lhs = binom(a + b, n);
    Rational rhs = 0;
    for (long k = 0; k <= n; ++k) rhs += binom(a, k) * binom(b, n - k);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("binom_derivative_coeffs explicit values") {
  CHECK(binom_derivative_coeffs(1) == std::vector<Rational>{Rational(1)});
  CHECK(binom_derivative_coeffs(2) == std::vector<Rational>{Rational(-1, 2), Rational(1)});
  CHECK(binom_derivative_coeffs(3) ==
        std::vector<Rational>{Rational(1, 3), Rational(-1, 2), Rational(1)});
  CHECK_THROWS_AS(binom_derivative_coeffs(0), DomainError);
}

namespace {

// independent oracle: binom(X,n) as a dense polynomial in X, differentiated
// coefficientwise
std::vector<Rational> binom_poly(long n) {
  std::vector<Rational> p{1};  // product of (X - i) / n!
  for (long i = 0; i < n; ++i) {
    std::vector<Rational> q(p.size() + 1, 0);
    for (size_t j = 0; j < p.size(); ++j) {
      q[j + 1] += p[j];
      q[j] -= p[j] * i;
    }
    p = std::move(q);
  }
  Rational fact = 1;
  for (long i = 2; i <= n; ++i) fact *= i;
  for (auto& c : p) c /= fact;
  return p;
}

Rational eval_poly(const std::vector<Rational>& p, const Rational& x) {
  Rational r = 0;
  for (size_t i = p.size(); i-- > 0;) r = r * x + p[i];
  return r;
}

}  // namespace

TEST_CASE("derivative identity d/dX binom(X,n) = sum c_j binom(X,j) at n+1 points") {
  for (long n = 1; n <= 10; ++n) {
    auto coeffs = binom_derivative_coeffs(n);
    auto p = binom_poly(n);
    std::vector<Rational> dp(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) dp[i - 1] = p[i] * static_cast<long>(i);
    for (long pt = 0; pt <= n; ++pt) {
      Rational x = Rational(2 * pt + 1, 3);
      Rational lhs = eval_poly(dp, x);
      Rational rhs = 0;
      for (long j = 0; j < n; ++j) rhs += coeffs[static_cast<size_t>(j)] * binom(x, j);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("rational helpers") {
  CHECK(floor_int(Rational(7, 2)) == 3);
  CHECK(floor_int(Rational(-7, 2)) == -4);
  CHECK(frac_part(Rational(-7, 2)) == Rational(1, 2));
  CHECK(frac_part(Rational(5)) == 0);
  CHECK(pow_int(Rational(2, 3), -2) == Rational(9, 4));
  CHECK(parse_rational("-3/4") == Rational(-3, 4));
  CHECK_THROWS_AS(parse_rational("x"), DomainError);
}

TEST_CASE("VarContext invariants") {
  VarContext ctx({Rational(0), Rational(1, 2)});
  CHECK(ctx.has(Rational(0)));
  CHECK_FALSE(ctx.fully_certified());
  ctx.set_closeness(Rational(0), Rational(1, 2), Rational(3, 4));
  CHECK(ctx.fully_certified());

  CHECK_THROWS_AS(VarContext({Rational(1)}), DomainError);
  CHECK_THROWS_AS(VarContext({Rational(0), Rational(0)}), DomainError);

  VarContext bad({Rational(0), Rational(1, 2)});
  // certificate must exceed the gap and lie in (0,1)
  CHECK_THROWS_AS(bad.set_closeness(Rational(0), Rational(1, 2), Rational(1, 4)), DomainError);
  CHECK_THROWS_AS(bad.set_closeness(Rational(0), Rational(1, 2), Rational(1)), DomainError);
  CHECK_THROWS_AS(bad.set_closeness(Rational(1, 2), Rational(0), Rational(3, 4)), DomainError);

  VarContext autod = VarContext::for_offsets({Rational(0), Rational(1, 3), Rational(2, 3)});
  CHECK(autod.fully_certified());
}
