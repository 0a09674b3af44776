#include "tx/rewrite.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tx {

int g_default_truncation_order = 30;

namespace {

thread_local long long g_last_witness_steps = 0;

// Derivation E_d -> E_d E_{d+1} on finite H-polynomials (Leibniz).
HPoly star_deriv_poly(const HPoly& p) {
  HPoly out;
  for (auto& t : p.terms()) {
    for (auto& e : t.m.entries()) {
      HMonomial m = t.m;
      m.add(h_key(e.first.d + 1, e.first.var, e.first.m), 1);
      out.add(m, t.c * e.second);
    }
  }
  return out;
}

HMonomial rekey_h(const HMonomial& m, const Rational& var, int shift) {
  HMonomial r;
  for (auto& e : m.entries()) r.add(h_key(e.first.d, var, e.first.m + shift), e.second);
  return r;
}

HPoly rekey_h(const HPoly& p, const Rational& var, int shift) {
  HPoly r;
  for (auto& t : p.terms()) r.add(rekey_h(t.m, var, shift), t.c);
  return r;
}

// P_d = the E_* polynomial of E^{(d)} at canonical position (variable 0,
// shift 0): P_0 = E_0 and P_{d+1} = star derivative of P_d.
const HPoly& sigma_poly(int d) {
  static std::vector<HPoly> cache;
  if (cache.empty()) cache.push_back(HPoly::monomial(HMonomial{{h_key(0), 1}}));
  while (static_cast<int>(cache.size()) <= d) cache.push_back(star_deriv_poly(cache.back()));
  return cache[static_cast<size_t>(d)];
}

// zeta_d = P_d / (E_0 E_1^d) - 1 at canonical position.
const HPoly& zeta_poly(int d) {
  static std::map<int, HPoly> cache;
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  HMonomial lead;
  lead.add(h_key(0), 1);
  lead.add(h_key(1), d);
  HPoly z = sigma_poly(d).mul_monomial(lead.inverse());
  z.add(HMonomial{}, -1);
  return cache.emplace(d, std::move(z)).first->second;
}

}  // namespace

LogESum bell(int d, const Rational& var, int m) {
  if (d < 1) throw DomainError("bell: d must be >= 1");
  static std::vector<LogESum> cache;  // at canonical (var 0, shift 0)
  if (cache.empty()) {
    cache.push_back(LogESum(1));                      // B_0 = 1
    cache.push_back(LogESum::generator(e_key(1)));    // B_1 = E'
  }
  while (static_cast<int>(cache.size()) <= d) {
    const LogESum& prev = cache.back();
    cache.push_back(d_esum(prev) + LogESum::generator(e_key(1)) * prev);
  }
  const LogESum& canon = cache[static_cast<size_t>(d)];
  if (var == 0 && m == 0) return canon;
  LogESum out;
  for (auto& t : canon.terms()) {
    EMonomial mono;
    for (auto& e : t.first.entries()) mono.add(e_key(e.first.d, var, e.first.m + m), e.second);
    out.add_term(mono, t.second);
  }
  return out;
}

GPtr eps_graded(int d, const Rational& var, int m) {
  if (d < 2) throw DomainError("epsilon: d must be >= 2");
  static std::map<std::tuple<int, Rational, int>, GPtr> cache;
  auto key = std::make_tuple(d, var, m);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  GPtr r;
  if (d == 2) {
    HMonomial e2;
    e2.add(h_key(2, var, m), 1);
    e2.add(h_key(1, var, m), -1);
    r = graded_poly(HPoly::monomial(e2));
  } else {
    GPtr prev = eps_graded(d - 1, var, m);
    // eps_d = [partial(eps_{d-1}) / E_{d-1}] * sum_j (-eps_{d-1})^j
    r = graded_mul(graded_deriv_div(prev, h_key(d - 1, var, m)), graded_binom(-1, prev));
  }
  cache.emplace(key, r);
  return r;
}

// eta_d = (1 + eps_d)(1 + eps_{d+1}) - 1 = eps_d + partial(eps_d)/E_d.
// For d = 2 this collapses to the single monomial E_3/E_1; products of
// consecutive eps factors are rewritten through it so that tails which are
// secretly finite get declared finite.
GPtr eta_graded(int d, const Rational& var, int m) {
  static std::map<std::tuple<int, Rational, int>, GPtr> cache;
  auto key = std::make_tuple(d, var, m);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  GPtr r;
  if (d == 2) {
    HMonomial e3;
    e3.add(h_key(3, var, m), 1);
    e3.add(h_key(1, var, m), -1);
    r = graded_poly(HPoly::monomial(e3));
  } else {
    GPtr eps = eps_graded(d, var, m);
    r = graded_add(eps, graded_deriv_div(eps, h_key(d, var, m)));
  }
  cache.emplace(key, r);
  return r;
}

// Series view of c * head * (graded tail), emitted level by level.
class GradedSeriesNode final : public SeriesNode {
 public:
  GradedSeriesNode(Rational c, HMonomial head, GPtr g)
      : c_(std::move(c)), head_(std::move(head)), g_(std::move(g)) {}

 protected:
  bool produce() override {
    int empty_streak = 0;
    for (;;) {
      ExpansionBudget::charge();
      if (g_->max_grade >= 0 && next_ > g_->max_grade) return false;
      const HPoly& lvl = g_->level(next_);
      ++next_;
      if (lvl.zero()) {
        // every tail built here has nonvanishing levels at bounded gaps; a
        // long empty run means an unnormalized telescoping product
        if (++empty_streak > 512) throw TxError("graded tail stalled on empty levels");
        continue;
      }
      for (auto& t : lvl.terms()) cache_.push_back(HTerm{t.c * c_, t.m.mul(head_)});
      return true;
    }
  }

 private:
  Rational c_;
  HMonomial head_;
  GPtr g_;
  int next_ = 0;
};

HSeries series_graded(Rational c, HMonomial head, GPtr g) {
  return std::make_shared<GradedSeriesNode>(std::move(c), std::move(head), std::move(g));
}

// Combines per-position graded tails into one lazy series: tails at the same
// position are multiplied gradewise, distinct positions meet in the
// collision-free pair frontier.
HSeries tails_product(const Rational& c, const HMonomial& head,
                      std::vector<std::pair<HKey, GPtr>> tails) {
  std::map<std::pair<Rational, int>, GPtr> by_pos;
  for (auto& [pos, g] : tails) {
    auto key = std::make_pair(pos.var, pos.m);
    auto it = by_pos.find(key);
    if (it == by_pos.end())
      by_pos.emplace(key, g);
    else
      it->second = graded_mul(it->second, g);
  }
  if (by_pos.empty()) return series_finite(HPoly::monomial(head, c));
  if (by_pos.size() == 1)
    return series_graded(c, head, by_pos.begin()->second, by_pos.begin()->first);
  std::vector<HSeries> fs;
  bool first = true;
  for (auto& [pos, g] : by_pos) {
    if (first)
      fs.push_back(series_graded(c, head, g, pos));
    else
      fs.push_back(series_graded(1, HMonomial{}, g, pos));
    first = false;
  }
  return series_prod(std::move(fs));
}

GPtr zeta_graded(int d, const Rational& var, int m) {
  static std::map<std::tuple<int, Rational, int>, GPtr> cache;
  auto key = std::make_tuple(d, var, m);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  GPtr r = graded_poly(rekey_h(zeta_poly(d), var, m));
  cache.emplace(key, r);
  return r;
}

HSeries sigma_generator(const EKey& k, const Rational& a) {
  if (k.kind != Gen::E) throw DomainError("sigma: log generator");
  if (a == 0) return series_constant(1);
  HMonomial head;
  head.add(h_key(0, k.var, k.m), a);
  if (k.d >= 1) head.add(h_key(1, k.var, k.m), a * k.d);
  if (k.d <= 1) return series_finite(HPoly::monomial(head));
  return series_graded(1, head, graded_binom(a, zeta_graded(k.d, k.var, k.m)),
                       std::make_pair(k.var, k.m));
}

HSeries sigma0(const LogESum& s) {
  std::vector<HSeries> parts;
  for (auto& t : s.terms()) {
    HMonomial head;
    std::vector<std::pair<HKey, GPtr>> tails;
    for (auto& e : t.first.entries()) {
      const EKey& k = e.first;
      if (k.kind != Gen::E) throw DomainError("sigma0: log generator present");
      head.add(h_key(0, k.var, k.m), e.second);
      if (k.d >= 1) head.add(h_key(1, k.var, k.m), e.second * k.d);
      if (k.d >= 2)
        tails.push_back({h_key(0, k.var, k.m),
                         graded_binom(e.second, zeta_graded(k.d, k.var, k.m))});
    }
    parts.push_back(tails_product(t.second, head, std::move(tails)));
  }
  return series_sum(std::move(parts));
}

HSeries epsilon_series(int d, const Rational& var, int m) {
  return series_graded(1, HMonomial{}, eps_graded(d, var, m), std::make_pair(var, m));
}

HSeries nu_term_image(const HTerm& t, int m) {
  HMonomial head;
  std::vector<std::pair<HKey, GPtr>> tails;
  // per-position exponents of E_{d>=2}, collected so that the (eps_2, eps_3)
  // pair can be put into the eta_2 normal form
  std::map<std::pair<Rational, int>, std::map<int, long>> stars;
  for (auto& e : t.m.entries()) {
    const HKey& k = e.first;
    if (k.d == 0) {
      head.add(k, e.second);
      continue;
    }
    if (k.m != m)
      throw DomainError("nu: E_d generator off the rewrite level");
    if (k.d == 1) {
      head.add(h_key(0, k.var, m + 1), e.second);
      head.add(h_key(1, k.var, m + 1), e.second);
      continue;
    }
    if (!is_integer(e.second))
      throw DomainError("nu: non-integer exponent on E_" + std::to_string(k.d));
    head.add(h_key(k.d - 1, k.var, m + 1), e.second);
    stars[{k.var, m + 1}][k.d] = static_cast<long>(numerator(e.second));
  }
  for (auto& [pos, exps] : stars) {
    const Rational& var = pos.first;
    int lvl = pos.second;
    HKey poskey = h_key(0, var, lvl);
    auto exp_of = [&](int d) {
      auto it = exps.find(d);
      return it == exps.end() ? 0L : it->second;
    };
    long n2 = exp_of(2), n3 = exp_of(3);
    // (1+eps_2)^{n2} (1+eps_3)^{n3} = (1+eps_2)^{n2-n3} (1+eta_2)^{n3}
    if (n2 - n3 != 0)
      tails.push_back({poskey, graded_binom(n2 - n3, eps_graded(2, var, lvl))});
    if (n3 != 0)
      tails.push_back({poskey, graded_binom(n3, eta_graded(2, var, lvl))});
    for (auto& [d, n] : exps) {
      if (d <= 3 || n == 0) continue;
      tails.push_back({poskey, graded_binom(n, eps_graded(d, var, lvl))});
    }
  }
  return tails_product(t.c, head, std::move(tails));
}

HSeries nu_rewrite(const HSeries& s, int m) {
  return series_mapped(s, [m](const HTerm& t) { return nu_term_image(t, m); });
}

namespace {

int single_level_of(const LogESum& s) {
  std::optional<int> level;
  for (auto& t : s.terms())
    for (auto& e : t.first.entries()) {
      if (level && e.first.m != *level) throw DomainError("expected a single shift level");
      level = e.first.m;
    }
  return level.value_or(0);
}

HSeries rho_log_image(const EMonomial& ell, int m) {
  std::vector<HSeries> fs;
  for (auto& e : ell.entries()) {
    if (e.first.kind != Gen::LogE1 || e.first.m != m)
      throw DomainError("rho: bad log part");
    HMonomial head;
    head.add(h_key(0, e.first.var, m + 1), e.second);
    HMonomial u;
    u.add(h_key(1, e.first.var, m + 1), 1);
    u.add(h_key(0, e.first.var, m + 1), -1);
    fs.push_back(series_scale(1, head,
                              series_binom_tail(e.second, series_finite(HPoly::monomial(u)))));
  }
  return series_prod(std::move(fs));
}

HMonomial rho_log_leading(const EMonomial& ell, int m) {
  HMonomial lm;
  for (auto& e : ell.entries()) lm.add(h_key(0, e.first.var, m + 1), e.second);
  return lm;
}

// (E0,E1) exponent data of an H monomial.
std::vector<std::pair<HKey, Rational>> profile_of(const HMonomial& m) {
  std::vector<std::pair<HKey, Rational>> p;
  for (auto& e : m.entries())
    if (e.first.d <= 1) p.push_back(e);
  return p;
}

}  // namespace

HSeries rho0(const LogESum& s) {
  int m = single_level_of(s);
  std::vector<HSeries> parts;
  for (auto& grp : s.lambda_groups()) {
    HSeries g_img = nu_rewrite(sigma0(grp.g_sum), m);
    if (grp.ell.trivial())
      parts.push_back(std::move(g_img));
    else
      parts.push_back(series_mul(g_img, rho_log_image(grp.ell, m)));
  }
  return series_sum(std::move(parts));
}

InitProfile init_profile(const LogESum& s) {
  if (s.zero()) throw DomainError("init_profile: zero sum");
  int m = single_level_of(s);
  auto groups = s.lambda_groups();
  std::vector<Rational> vars = s.variables();

  struct Cand {
    EMonomial ell;
    HPoly t;
    // lexicographic ranking data: per variable (ascending offset = descending
    // variable) first the E0 exponent of the t-run, then E1 exponent + log
    // exponent.
    std::vector<Rational> alpha, beta_b;
  };
  std::vector<Cand> cands;
  for (auto& grp : groups) {
    HSeries sig = sigma0(grp.g_sum);
    if (!sig->has_term(0)) throw DomainError("init_profile: sigma image vanished");
    auto prof = profile_of(sig->term(0).m);
    HPoly t;
    for (size_t i = 0;; ++i) {
      if (!sig->has_term(i)) break;
      if (profile_of(sig->term(i).m) != prof) break;
      t.add(sig->term(i).m, sig->term(i).c);
    }
    Cand c;
    c.ell = grp.ell;
    c.t = std::move(t);
    for (auto& v : vars) {
      Rational a = 0, b = 0, lg = 0;
      for (auto& e : prof) {
        if (e.first.var != v) continue;
        // only level-m data enters the ranking; lower-level E0 exponents are
        // fixed per group and cannot occur for single-level inputs
        if (e.first.d == 0 && e.first.m == m) a = e.second;
        if (e.first.d == 1 && e.first.m == m) b = e.second;
      }
      for (auto& e : grp.ell.entries())
        if (e.first.var == v) lg = e.second;
      c.alpha.push_back(a);
      c.beta_b.push_back(b + lg);
    }
    cands.push_back(std::move(c));
  }

  auto rank_less = [](const Cand& x, const Cand& y) {
    if (x.alpha != y.alpha) return x.alpha < y.alpha;
    return x.beta_b < y.beta_b;
  };
  const Cand* best = &cands[0];
  for (auto& c : cands)
    if (rank_less(*best, c)) best = &c;

  InitProfile ip;
  std::vector<HSeries> parts;
  for (auto& c : cands) {
    if (rank_less(c, *best)) continue;
    InitProfile::Part p;
    p.ell = c.ell;
    p.t = c.t;
    p.ell_lm = rho_log_leading(c.ell, m);
    parts.push_back(series_scale(1, p.ell_lm, nu_rewrite(series_finite(c.t), m)));
    ip.parts.push_back(std::move(p));
  }
  ip.init = series_sum(std::move(parts));
  return ip;
}

std::optional<SignWitness> sign_witness(const LogESum& s) {
  if (s.zero()) return std::nullopt;
  ExpansionBudget budget(8'000'000);
  InitProfile ip = init_profile(s);
  auto lt = leading_term(ip.init);
  g_last_witness_steps = ExpansionBudget::used();
  if (!lt) throw TxError("sign_witness: Init(s) vanished for nonzero s");
  return SignWitness{lt->c, lt->m};
}

int sign(const LogESum& s) {
  auto w = sign_witness(s);
  return w ? sgn(w->c) : 0;
}

std::optional<SignWitness> sign_witness_multi(const LogESum& s) {
  if (s.zero()) return std::nullopt;
  int deepest = s.max_shift().value_or(0);
  bool multilevel = false;
  for (auto& t : s.terms())
    for (auto& e : t.first.entries())
      if (e.first.m != deepest) multilevel = true;
  if (!multilevel) return sign_witness(s);

  ExpansionBudget budget(8'000'000);
  std::vector<HSeries> parts;
  for (auto& t : s.terms()) {
    std::vector<HSeries> fs;
    for (auto& e : t.first.entries()) {
      const EKey& k = e.first;
      HSeries f;
      int star_level;
      if (k.kind == Gen::E) {
        f = sigma_generator(k, e.second);
        star_level = k.m;
      } else {
        EMonomial ell;
        ell.add(k, e.second);
        f = rho_log_image(ell, k.m);
        star_level = k.m + 1;
      }
      for (int lvl = star_level; lvl <= deepest; ++lvl) f = nu_rewrite(f, lvl);
      fs.push_back(std::move(f));
    }
    parts.push_back(series_scale(t.second, HMonomial{}, series_prod(std::move(fs))));
  }
  auto lt = leading_term(series_sum(std::move(parts)));
  g_last_witness_steps = ExpansionBudget::used();
  if (!lt) throw TxError("sign_witness_multi: series vanished for nonzero sum");
  return SignWitness{lt->c, lt->m};
}

int sign_multi(const LogESum& s) {
  auto w = sign_witness_multi(s);
  return w ? sgn(w->c) : 0;
}

long long last_witness_steps() { return g_last_witness_steps; }

PhiImage phi_generator(const EKey& k, const Rational& a) {
  PhiImage img;
  if (a == 0) {
    img.factor = LogESum(1);
    return img;
  }
  if (k.kind == Gen::LogE1) {
    img.factor = LogESum::generator(e_key(0, k.var, k.m + 1), a);
    img.tail_a = a;
    EMonomial u;
    u.add(loge1_key(k.var, k.m + 1), 1);
    u.add(e_key(0, k.var, k.m + 1), -1);
    img.tail_u = LogESum::monomial(u);
    return img;
  }
  img.e_arg = LogESum::generator(e_key(0, k.var, k.m + 1), 1, a);
  if (k.d == 0) {
    img.factor = LogESum(1);
    return img;
  }
  img.factor = LogESum::generator(e_key(1, k.var, k.m + 1), a * k.d);
  if (k.d == 1) return img;
  img.tail_a = a;
  EMonomial ep;
  ep.add(e_key(1, k.var, k.m + 1), -k.d);
  img.tail_u = bell(k.d, k.var, k.m + 1).mul_monomial(ep) - LogESum(1);
  return img;
}

LogESum phi_finite(const LogESum& s) {
  LogESum out;
  for (auto& t : s.terms()) {
    LogESum e_arg;
    LogESum prod(1);
    for (auto& e : t.first.entries()) {
      if (!is_natural(e.second) && e.first.kind == Gen::E && e.first.d >= 2)
        throw DomainError("phi_finite: needs natural exponents on higher derivatives");
      PhiImage img = phi_generator(e.first, e.second);
      e_arg = e_arg + img.e_arg;
      LogESum f = img.factor;
      if (!img.tail_u.zero()) {
        if (!is_natural(img.tail_a)) throw DomainError("phi_finite: infinite tail");
        long n = static_cast<long>(numerator(img.tail_a));
        LogESum tail;
        for (long j = 0; j <= n; ++j) tail = tail + img.tail_u.pow_nat(j).scaled(binom(img.tail_a, j));
        f = f * tail;
      }
      prod = prod * f;
    }
    if (!e_arg.zero()) throw DomainError("phi_finite: tower part does not cancel");
    out = out + prod.scaled(t.second);
  }
  return out;
}

namespace {

HPoly approx_pow(const HPoly& u, const Rational& a, int order) {
  // sum_{k<=order} binom(a,k) u^k, truncation of the binomial tail
  HPoly r(1);
  HPoly uk(1);
  long kmax = order;
  if (is_natural(a)) kmax = std::min<long>(kmax, static_cast<long>(numerator(a)));
  for (long k = 1; k <= kmax; ++k) {
    uk = uk * u;
    r = r + uk.scaled(binom(a, k));
  }
  return r;
}

HPoly approx_sigma_term(const EMonomial& mono, const Rational& coeff, int order) {
  HPoly r(coeff);
  HMonomial finite;
  for (auto& e : mono.entries()) {
    const EKey& k = e.first;
    if (k.kind != Gen::E) throw DomainError("approx: log generator in sigma");
    finite.add(h_key(0, k.var, k.m), e.second);
    if (k.d >= 1) finite.add(h_key(1, k.var, k.m), e.second * k.d);
    if (k.d >= 2) r = r * approx_pow(rekey_h(zeta_poly(k.d), k.var, k.m), e.second, order);
  }
  return r.mul_monomial(finite);
}

HPoly approx_epsilon(int d, const Rational& var, int m, int order) {
  if (d == 2) {
    HMonomial e2;
    e2.add(h_key(2, var, m), 1);
    e2.add(h_key(1, var, m), -1);
    return HPoly::monomial(e2);
  }
  HPoly prev = approx_epsilon(d - 1, var, m, order);
  HMonomial div;
  div.add(h_key(d - 1, var, m), -1);
  return star_deriv_poly(prev).mul_monomial(div) * approx_pow(prev, -1, order);
}

HPoly approx_nu_term(const HTerm& t, int m, int order) {
  HPoly r(t.c);
  HMonomial finite;
  for (auto& e : t.m.entries()) {
    const HKey& k = e.first;
    if (k.d == 0) {
      finite.add(k, e.second);
    } else if (k.d == 1) {
      if (k.m != m) throw DomainError("approx nu: off-level E_1");
      finite.add(h_key(0, k.var, m + 1), e.second);
      finite.add(h_key(1, k.var, m + 1), e.second);
    } else {
      if (k.m != m) throw DomainError("approx nu: off-level E_d");
      finite.add(h_key(k.d - 1, k.var, m + 1), e.second);
      r = r * approx_pow(approx_epsilon(k.d, k.var, m + 1, order), e.second, order);
    }
  }
  return r.mul_monomial(finite);
}

HPoly approx_nu(const HPoly& p, int m, int order) {
  HPoly r;
  for (auto& t : p.terms()) r = r + approx_nu_term(t, m, order);
  return r;
}

}  // namespace

std::optional<SignWitness> truncation_oracle(const LogESum& s, int order) {
  if (s.zero()) return std::nullopt;
  int m = single_level_of(s);
  HPoly total;
  for (auto& grp : s.lambda_groups()) {
    HPoly g_img;
    for (auto& t : grp.g_sum.terms())
      g_img = g_img + approx_nu(approx_sigma_term(t.first, t.second, order), m, order);
    HPoly l_img(1);
    for (auto& e : grp.ell.entries()) {
      HMonomial head;
      head.add(h_key(0, e.first.var, m + 1), e.second);
      HMonomial u;
      u.add(h_key(1, e.first.var, m + 1), 1);
      u.add(h_key(0, e.first.var, m + 1), -1);
      l_img = l_img * approx_pow(HPoly::monomial(u), e.second, order).mul_monomial(head);
    }
    total = total + g_img * l_img;
  }
  auto lt = total.leading();
  if (!lt) return std::nullopt;
  return SignWitness{lt->c, lt->m};
}

}  // namespace tx
