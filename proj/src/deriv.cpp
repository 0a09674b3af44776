#include "tx/deriv.hpp"

#include "tx/rewrite.hpp"

namespace tx {

HPoly d_hpoly(const HPoly& p) {
  HPoly out;
  for (auto& t : p.terms()) {
    for (auto& e : t.m.entries()) {
      if (!is_integer(e.second)) throw DomainError("d_hpoly: non-integer exponent");
      HMonomial m = t.m;
      m.add(h_key(e.first.d + 1, e.first.var, e.first.m), 1);
      out.add(m, t.c * e.second);
    }
  }
  return out;
}

HSeries d_hseries(const HSeries& s) {
  return series_mapped(s, [](const HTerm& t) {
    HPoly p;
    for (auto& e : t.m.entries()) {
      if (!is_integer(e.second)) throw DomainError("d_hseries: non-integer exponent");
      HMonomial m = t.m;
      m.add(h_key(e.first.d + 1, e.first.var, e.first.m), 1);
      p.add(m, t.c * e.second);
    }
    return series_finite(p);
  });
}

bool check_sigma_commutes(const LogESum& s, size_t order) {
  for (auto& t : s.terms())
    for (auto& e : t.first.entries())
      if (!is_integer(e.second)) throw DomainError("check_sigma_commutes: non-integer exponent");
  HSeries lhs = sigma0(d_esum(s));
  HSeries rhs = d_hseries(sigma0(s));
  return truncations_equal(lhs, rhs, order);
}

}  // namespace tx
