#ifndef TX_CONTEXT_HPP
#define TX_CONTEXT_HPP

#include <map>
#include <utility>
#include <vector>

#include "tx/rational.hpp"

namespace tx {

// An ordered set of abstract variables together with closeness certificates.
//
// A variable is identified by its fractional offset v in [0,1): the variable
// stands for "x - v", so smaller offsets are larger variables. Occurrences in
// monomials carry an additional integer shift m and denote "x - v - m".
//
// For every pair w1 > w2 the context stores a certificate r(w1,w2) in (0,1)
// with (w1 - w2) < r(w1,w2). Certificates are supplied at construction and
// validated; they are never inferred here.
class VarContext {
 public:
  VarContext() = default;

  // offsets need not be sorted; duplicates are rejected.
  explicit VarContext(std::vector<Rational> offsets) {
    for (auto& v : offsets) add_variable(v);
  }

  void add_variable(const Rational& v) {
    if (v < 0 || v >= 1) throw DomainError("variable offset must lie in [0,1)");
    for (auto& u : offsets_)
      if (u == v) throw DomainError("duplicate variable");
    offsets_.push_back(v);
    std::sort(offsets_.begin(), offsets_.end());
  }

  // r certifies w(hi) - w(lo) < r for hi ranked above lo (hi offset < lo offset).
  void set_closeness(const Rational& hi, const Rational& lo, const Rational& r) {
    if (!(hi < lo)) throw DomainError("closeness: first variable must be larger");
    if (!(r > 0 && r < 1)) throw DomainError("closeness certificate must lie in (0,1)");
    if (!(lo - hi < r)) throw DomainError("closeness certificate too small");
    closeness_[{hi, lo}] = r;
  }

  bool has(const Rational& v) const {
    for (auto& u : offsets_)
      if (u == v) return true;
    return false;
  }

  // Certified iff every pair carries a certificate.
  bool fully_certified() const {
    for (size_t i = 0; i < offsets_.size(); ++i)
      for (size_t j = i + 1; j < offsets_.size(); ++j)
        if (!closeness_.count({offsets_[i], offsets_[j]})) return false;
    return true;
  }

  const std::vector<Rational>& offsets() const { return offsets_; }

  // Context for the distinct-fractional-offset fragment: offsets differ by
  // less than 1, so the midpoint certificate is always valid.
  static VarContext for_offsets(std::vector<Rational> offsets) {
    VarContext c(std::move(offsets));
    for (size_t i = 0; i < c.offsets_.size(); ++i)
      for (size_t j = i + 1; j < c.offsets_.size(); ++j) {
        Rational gap = c.offsets_[j] - c.offsets_[i];
        c.set_closeness(c.offsets_[i], c.offsets_[j], (gap + 1) / 2);
      }
    return c;
  }

 private:
  std::vector<Rational> offsets_;  // ascending offset = descending variable
  std::map<std::pair<Rational, Rational>, Rational> closeness_;
};

}  // namespace tx

#endif
