#ifndef TX_MONOMIAL_HPP
#define TX_MONOMIAL_HPP

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tx/context.hpp"
#include "tx/rational.hpp"

namespace tx {

enum class Gen : unsigned char {
  E = 0,     // E^{(d)}(x - var - m)
  LogE1 = 1  // log E'(x - var - m)
};

// Generator of G_{X-m} or Lambda_{X-m}. var is the fractional variable offset,
// m the integer shift, d the derivative index (0 for LogE1).
struct EKey {
  Rational var;
  int m = 0;
  Gen kind = Gen::E;
  int d = 0;

  friend bool operator==(const EKey& a, const EKey& b) {
    return a.kind == b.kind && a.d == b.d && a.m == b.m && a.var == b.var;
  }
  friend bool operator<(const EKey& a, const EKey& b) {
    if (a.var != b.var) return a.var < b.var;
    if (a.m != b.m) return a.m < b.m;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.d < b.d;
  }
};

inline EKey e_key(int d, const Rational& var = 0, int m = 0) {
  return EKey{var, m, Gen::E, d};
}
inline EKey loge1_key(const Rational& var = 0, int m = 0) {
  return EKey{var, m, Gen::LogE1, 0};
}

// Generator E_d(x - var - m) of the logarithmic-derivative group H.
//
// Keys sort in the comparison sequence of the H order: E_0 levels first
// (higher arguments first, larger variables first within a level), then
// E_1, E_2, ... The lexicographic walk over two sorted exponent vectors is
// then exactly the paper's first-nonzero-exponent test.
struct HKey {
  Rational var;
  int m = 0;
  int d = 0;

  friend bool operator==(const HKey& a, const HKey& b) {
    return a.d == b.d && a.m == b.m && a.var == b.var;
  }
  friend bool operator<(const HKey& a, const HKey& b) {
    bool a0 = a.d == 0, b0 = b.d == 0;
    if (a0 != b0) return a0;
    if (!a0 && a.d != b.d) return a.d < b.d;
    if (a.m != b.m) return a.m < b.m;
    return a.var < b.var;
  }
};

inline HKey h_key(int d, const Rational& var = 0, int m = 0) {
  return HKey{var, m, d};
}

// Sparse exponent map with no zero entries, sorted by key.
template <class K>
class ExponentMap {
 public:
  using Entry = std::pair<K, Rational>;

  ExponentMap() = default;
  ExponentMap(std::initializer_list<Entry> es) {
    for (auto& e : es) add(e.first, e.second);
  }

  void add(const K& k, const Rational& e) {
    if (e == 0) return;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                               [](const Entry& a, const K& b) { return a.first < b; });
    if (it != entries_.end() && it->first == k) {
      it->second += e;
      if (it->second == 0) entries_.erase(it);
    } else {
      entries_.insert(it, {k, e});
    }
  }

  Rational exponent(const K& k) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                               [](const Entry& a, const K& b) { return a.first < b; });
    if (it != entries_.end() && it->first == k) return it->second;
    return 0;
  }

  bool trivial() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  ExponentMap mul(const ExponentMap& o) const {
    ExponentMap r = *this;
    for (auto& e : o.entries_) r.add(e.first, e.second);
    return r;
  }
  ExponentMap inverse() const {
    ExponentMap r;
    for (auto& e : entries_) r.entries_.push_back({e.first, -e.second});
    return r;
  }
  ExponentMap pow(const Rational& a) const {
    ExponentMap r;
    if (a == 0) return r;
    for (auto& e : entries_) r.entries_.push_back({e.first, e.second * a});
    return r;
  }

  friend bool operator==(const ExponentMap& a, const ExponentMap& b) {
    return a.entries_ == b.entries_;
  }
  friend bool operator<(const ExponentMap& a, const ExponentMap& b) {
    return a.entries_ < b.entries_;
  }

 private:
  std::vector<Entry> entries_;
};

// Element of the group G_{X-m} Lambda_{X-m} (mixed E- and log-generators).
// GMonomial / LogMonomial are the pure-E and pure-log special cases.
using EMonomial = ExponentMap<EKey>;
using GMonomial = EMonomial;
using LogMonomial = EMonomial;

using HMonomial = ExponentMap<HKey>;

enum class Cmp { Less = -1, Equal = 0, Greater = 1 };

// Order on H monomials: h > 1 iff the first nonzero exponent is positive when
// generators are visited E_0-levels first (higher arguments first, larger
// variables first within a level), then E_1, E_2, ... per level.
Cmp cmp_H(const HMonomial& a, const HMonomial& b);

// Context-checked variant; throws DomainError when a variable is missing.
Cmp cmp_H(const VarContext& ctx, const HMonomial& a, const HMonomial& b);

bool h_less(const HMonomial& a, const HMonomial& b);

// Per-variable exponent sums xi_x of a G-part (log generators ignored).
struct SmallnessProfile {
  std::vector<std::pair<Rational, Rational>> xi;  // (variable offset, sum)

  Rational at(const Rational& var) const {
    for (auto& p : xi)
      if (p.first == var) return p.second;
    return 0;
  }
};

SmallnessProfile smallness_profile(const EMonomial& g);
bool is_small(const EMonomial& g);

bool g_part_only(const EMonomial& m);   // no log generators
bool log_part_only(const EMonomial& m); // only log generators

EMonomial g_part(const EMonomial& m);
EMonomial log_part(const EMonomial& m);

// Membership in the additive generator set T_X: natural exponents of the shape
// log E'(x)^{a_-1} E''^{a_2} ... E^{(d)}^{a_d} / E'^{a_2+...+a_d} on a single
// shift level, excluding constants and bare log E'(x).
bool is_tx_monomial(const EMonomial& m);

std::string to_string(const EKey& k);
std::string to_string(const HKey& k);
std::string to_string(const EMonomial& m);
std::string to_string(const HMonomial& m);

}  // namespace tx

#endif
