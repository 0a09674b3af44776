#ifndef TX_LOGESUM_HPP
#define TX_LOGESUM_HPP

#include <functional>
#include <string>
#include <vector>

#include "tx/monomial.hpp"

namespace tx {

struct LambdaGroup;

// Finite element of the group ring k[G_{X-m} Lambda_{X-m}], kept canonical:
// no zero coefficients, monomials sorted structurally.
class LogESum {
 public:
  using Term = std::pair<EMonomial, Rational>;

  LogESum() = default;
  LogESum(const Rational& c) { add_term(EMonomial{}, c); }
  static LogESum monomial(const EMonomial& m, const Rational& c = 1) {
    LogESum s;
    s.add_term(m, c);
    return s;
  }
  static LogESum generator(const EKey& k, const Rational& exp = 1, const Rational& c = 1) {
    EMonomial m;
    m.add(k, exp);
    return monomial(m, c);
  }

  void add_term(const EMonomial& m, const Rational& c);

  bool zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  Rational coefficient(const EMonomial& m) const;

  LogESum operator+(const LogESum& o) const;
  LogESum operator-(const LogESum& o) const;
  LogESum operator-() const;
  LogESum operator*(const LogESum& o) const;
  LogESum scaled(const Rational& c) const;
  LogESum mul_monomial(const EMonomial& m, const Rational& c = 1) const;
  LogESum pow_nat(long n) const;

  friend bool operator==(const LogESum& a, const LogESum& b) { return a.terms_ == b.terms_; }
  friend bool operator<(const LogESum& a, const LogESum& b) { return a.terms_ < b.terms_; }

  // True iff every monomial is a T_X generator shape (see is_tx_monomial).
  bool in_tx() const;

  // Distinct variables occurring, ascending offset (descending variable).
  std::vector<Rational> variables() const;
  VarContext derived_context() const { return VarContext::for_offsets(variables()); }

  // Max integer shift among generators; nullopt for a constant sum.
  std::optional<int> max_shift() const;
  std::optional<int> min_shift() const;

  // Splits into groups with equal log-part: s = sum_i s_i * l_i.
  std::vector<LambdaGroup> lambda_groups() const;

  std::string str() const;

 private:
  std::vector<Term> terms_;
};

struct LambdaGroup {
  EMonomial ell;    // the common log monomial
  LogESum g_sum;    // sum of c * g with pure-G monomials
};

inline bool is_in_TX(const LogESum& s) { return s.in_tx(); }

// Formal d/dx: every generator depends on the single underlying variable, so
// E^{(d)}(x-s) differentiates to E^{(d+1)}(x-s) and log E'(x-s) to
// E''(x-s)/E'(x-s); products follow Leibniz. Total on the group ring.
LogESum d_esum(const LogESum& s);

}  // namespace tx

#endif
