#ifndef TX_HSERIES_HPP
#define TX_HSERIES_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tx/monomial.hpp"

namespace tx {

struct HTerm {
  Rational c;
  HMonomial m;
  friend bool operator==(const HTerm& a, const HTerm& b) { return a.c == b.c && a.m == b.m; }
};

// Finite H-sum in strictly decreasing monomial order with merged coefficients.
class HPoly {
 public:
  HPoly() = default;
  HPoly(const Rational& c) { add(HMonomial{}, c); }
  static HPoly monomial(const HMonomial& m, const Rational& c = 1) {
    HPoly p;
    p.add(m, c);
    return p;
  }

  void add(const HMonomial& m, const Rational& c);

  bool zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }
  const std::vector<HTerm>& terms() const { return terms_; }
  std::optional<HTerm> leading() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.front();
  }

  HPoly operator+(const HPoly& o) const;
  HPoly operator-(const HPoly& o) const;
  HPoly operator*(const HPoly& o) const;
  HPoly scaled(const Rational& c) const;
  HPoly mul_monomial(const HMonomial& m, const Rational& c = 1) const;
  HPoly pow_nat(long n) const;

  friend bool operator==(const HPoly& a, const HPoly& b) { return a.terms_ == b.terms_; }

  std::string str() const;

 private:
  std::vector<HTerm> terms_;  // strictly decreasing in cmp_H
};

// Guard for lazy expansion work. Each produced candidate charges one step;
// exceeding the limit throws BudgetExceeded instead of looping on series
// whose terms cancel forever.
class ExpansionBudget {
 public:
  explicit ExpansionBudget(long long steps);
  ~ExpansionBudget();
  ExpansionBudget(const ExpansionBudget&) = delete;
  ExpansionBudget& operator=(const ExpansionBudget&) = delete;

  static void charge();
  static long long used();

 private:
  long long saved_limit_;
  long long saved_used_;
};

// ---------------------------------------------------------------------------
// Graded tails.
//
// The infinite tails produced by the rewrite maps live at one generator
// position (var, level) on the exponent-sum-zero lattice spanned by E_1,
// E_2, ...: every monomial has E_1 exponent -g and natural exponents summing
// to g on the higher E_d, so per grade g only finitely many monomials exist
// and smaller grades dominate in the H order. Such tails are manipulated
// gradewise with finite polynomial arithmetic.
// ---------------------------------------------------------------------------

class Graded {
 public:
  virtual ~Graded() = default;

  int max_grade = -1;  // -1 = unbounded

  const HPoly& level(int g);

 private:
  virtual HPoly compute(int g) = 0;
  std::vector<HPoly> memo_;
};

using GPtr = std::shared_ptr<Graded>;

int tail_grade(const HMonomial& m);

GPtr graded_poly(const HPoly& p);
GPtr graded_mul(GPtr a, GPtr b);
GPtr graded_add(GPtr a, GPtr b);
// sum_k binom(a,k) u^k; u must have an empty grade-0 part
GPtr graded_binom(const Rational& a, GPtr u);
// [partial(s) / E_div] with the star derivation E_d -> E_d E_{d+1}
GPtr graded_deriv_div(GPtr s, const HKey& div);

// Lazily expandable reverse-well-ordered series. Nodes memoize the prefix
// they have produced, so several consumers share the work. Expansion state
// is confined to the node; values handed out are plain terms.
class SeriesNode {
 public:
  virtual ~SeriesNode() = default;

  // Materializes terms up to index i; false when the series is exhausted
  // before that.
  bool has_term(size_t i);
  const HTerm& term(size_t i) { return cache_[i]; }
  bool known_exhausted_at(size_t n) const { return exhausted_ && cache_.size() <= n; }

 protected:
  // Appends at least one term (strictly smaller than the previous one) to
  // cache_, or returns false when no terms remain.
  virtual bool produce() = 0;

  std::vector<HTerm> cache_;
  bool exhausted_ = false;
};

using HSeries = std::shared_ptr<SeriesNode>;

HSeries series_finite(HPoly p);
HSeries series_constant(const Rational& c);
// c * m * inner
HSeries series_scale(const Rational& c, const HMonomial& m, HSeries inner);
HSeries series_sum(std::vector<HSeries> children);
HSeries series_add(HSeries a, HSeries b);
HSeries series_mul(HSeries a, HSeries b);
HSeries series_prod(std::vector<HSeries> factors);
// sum_{k>=0} binom(a,k) u^k; every monomial of u must be < 1.
HSeries series_binom_tail(const Rational& a, HSeries u);

// c * head * tail for a graded tail at one generator position; series_mul
// fuses two of these at the same position into a single graded product.
HSeries series_graded(Rational c, HMonomial head, GPtr tail,
                      std::optional<std::pair<Rational, int>> pos = std::nullopt);

// sum over terms t of inner of map(t), valid when the leading monomials of
// the images are strictly decreasing along inner's emission order.
HSeries series_mapped(HSeries inner, std::function<HSeries(const HTerm&)> map);

std::optional<HTerm> leading_term(const HSeries& s);
HPoly truncate(const HSeries& s, size_t n);

// First n terms of both agree (used by tests; exact, no tolerance).
bool truncations_equal(const HSeries& a, const HSeries& b, size_t n);

}  // namespace tx

#endif
