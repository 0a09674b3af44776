#include "tx/gamma.hpp"

namespace tx {

namespace {

int common_level(const EMonomial& g, const EMonomial& ell, const LogESum& t) {
  std::optional<int> level;
  auto take = [&](int m) {
    if (level && *level != m) throw DomainError("Gamma0: mixed shift levels");
    level = m;
  };
  for (auto& e : g.entries()) take(e.first.m);
  for (auto& e : ell.entries()) take(e.first.m);
  for (auto& tm : t.terms())
    for (auto& e : tm.first.entries()) take(e.first.m);
  return level.value_or(0);
}

}  // namespace

Gamma0Monomial::Gamma0Monomial(GMonomial g_, LogMonomial ell_, LogESum t_)
    : g(std::move(g_)), ell(std::move(ell_)), t(std::move(t_)) {
  if (!g_part_only(g)) throw DomainError("Gamma0: group part has log generators");
  if (!log_part_only(ell)) throw DomainError("Gamma0: log part has E generators");
  if (!t.zero() && !t.in_tx()) throw DomainError("Gamma0: t part not in T_X");
}

Gamma0Monomial Gamma0Monomial::mul(const Gamma0Monomial& o) const {
  Gamma0Monomial r;
  r.g = g.mul(o.g);
  r.ell = ell.mul(o.ell);
  r.t = t + o.t;
  return r;
}

Gamma0Monomial Gamma0Monomial::inverse() const {
  Gamma0Monomial r;
  r.g = g.inverse();
  r.ell = ell.inverse();
  r.t = -t;
  return r;
}

HPoly log_hat(const EMonomial& gl, int m) {
  HPoly out;
  for (auto& p : smallness_profile(g_part(gl)).xi)
    out.add(HMonomial{{h_key(0, p.first, m + 1), 1}}, p.second);
  return out;
}

Cmp cmp_Gamma0(const Gamma0Monomial& a, const Gamma0Monomial& b) {
  GMonomial g = a.g.mul(b.g.inverse());
  LogMonomial ell = a.ell.mul(b.ell.inverse());
  LogESum t = a.t - b.t;

  if (t.zero()) {
    if (g.trivial() && ell.trivial()) return Cmp::Equal;
    LogESum diff = LogESum::monomial(g.mul(ell)) - LogESum(1);
    int s = sign(diff);
    if (s == 0) throw TxError("cmp_Gamma0: distinct monomials with zero difference");
    return s > 0 ? Cmp::Greater : Cmp::Less;
  }

  if (!t.in_tx()) throw DomainError("cmp_Gamma0: t part not in T_X");
  int m = common_level(g, ell, t);

  // a/b > 1  iff  log_hat(rho(g l)) + rho(t) > 0
  HPoly S = log_hat(g.mul(ell), m);
  auto w = sign_witness(t);
  if (!w) throw TxError("cmp_Gamma0: nonzero t without witness");

  int s;
  if (S.zero()) {
    s = sgn(w->c);
  } else {
    const HTerm& lead = S.terms().front();
    switch (cmp_H(lead.m, w->m)) {
      case Cmp::Greater:
        s = sgn(lead.c);
        break;
      case Cmp::Less:
        s = sgn(w->c);
        break;
      default:
        // rho(t) leads with E_0(x-1)^k h, h != 1, so a tie with the pure
        // E_0(x-1) sum is impossible
        throw TxError("cmp_Gamma0: log-hat tied with rho(t) leading monomial");
    }
  }
  return s > 0 ? Cmp::Greater : Cmp::Less;
}

bool is_small_gamma(const Gamma0Monomial& m) { return m.t.zero() && is_small(m.g); }

}  // namespace tx
