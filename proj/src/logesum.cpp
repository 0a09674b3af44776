#include "tx/logesum.hpp"

#include <algorithm>
#include <set>

namespace tx {

void LogESum::add_term(const EMonomial& m, const Rational& c) {
  if (c == 0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& a, const EMonomial& b) { return a.first < b; });
  if (it != terms_.end() && it->first == m) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  } else {
    terms_.insert(it, {m, c});
  }
}

Rational LogESum::coefficient(const EMonomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& a, const EMonomial& b) { return a.first < b; });
  if (it != terms_.end() && it->first == m) return it->second;
  return 0;
}

LogESum LogESum::operator+(const LogESum& o) const {
  LogESum r = *this;
  for (auto& t : o.terms_) r.add_term(t.first, t.second);
  return r;
}

LogESum LogESum::operator-(const LogESum& o) const {
  LogESum r = *this;
  for (auto& t : o.terms_) r.add_term(t.first, -t.second);
  return r;
}

LogESum LogESum::operator-() const {
  LogESum r;
  for (auto& t : terms_) r.terms_.push_back({t.first, -t.second});
  return r;
}

LogESum LogESum::operator*(const LogESum& o) const {
  LogESum r;
  for (auto& a : terms_)
    for (auto& b : o.terms_) r.add_term(a.first.mul(b.first), a.second * b.second);
  return r;
}

LogESum LogESum::scaled(const Rational& c) const {
  LogESum r;
  if (c == 0) return r;
  for (auto& t : terms_) r.terms_.push_back({t.first, t.second * c});
  return r;
}

LogESum LogESum::mul_monomial(const EMonomial& m, const Rational& c) const {
  LogESum r;
  for (auto& t : terms_) r.add_term(t.first.mul(m), t.second * c);
  return r;
}

LogESum LogESum::pow_nat(long n) const {
  if (n < 0) throw DomainError("pow_nat: negative power");
  LogESum r(1);
  LogESum base = *this;
  while (n > 0) {
    if (n & 1) r = r * base;
    base = base * base;
    n >>= 1;
  }
  return r;
}

bool LogESum::in_tx() const {
  if (zero()) return false;
  std::optional<int> level;
  for (auto& t : terms_) {
    if (!is_tx_monomial(t.first)) return false;
    for (auto& e : t.first.entries()) {
      if (level && e.first.m != *level) return false;
      level = e.first.m;
    }
  }
  return true;
}

std::vector<Rational> LogESum::variables() const {
  std::set<Rational> vs;
  for (auto& t : terms_)
    for (auto& e : t.first.entries()) vs.insert(e.first.var);
  return {vs.begin(), vs.end()};
}

std::optional<int> LogESum::max_shift() const {
  std::optional<int> m;
  for (auto& t : terms_)
    for (auto& e : t.first.entries())
      if (!m || e.first.m > *m) m = e.first.m;
  return m;
}

std::optional<int> LogESum::min_shift() const {
  std::optional<int> m;
  for (auto& t : terms_)
    for (auto& e : t.first.entries())
      if (!m || e.first.m < *m) m = e.first.m;
  return m;
}

std::vector<LambdaGroup> LogESum::lambda_groups() const {
  std::vector<LambdaGroup> gs;
  for (auto& t : terms_) {
    EMonomial ell = log_part(t.first);
    EMonomial g = g_part(t.first);
    bool found = false;
    for (auto& grp : gs)
      if (grp.ell == ell) {
        grp.g_sum.add_term(g, t.second);
        found = true;
        break;
      }
    if (!found) {
      LambdaGroup grp;
      grp.ell = ell;
      grp.g_sum.add_term(g, t.second);
      gs.push_back(std::move(grp));
    }
  }
  return gs;
}

std::string LogESum::str() const {
  if (zero()) return "0";
  std::string r;
  bool first = true;
  for (auto& t : terms_) {
    Rational c = t.second;
    if (first) {
      if (c < 0) r += "-";
    } else {
      r += c < 0 ? " - " : " + ";
    }
    first = false;
    Rational ac = c < 0 ? Rational(-c) : c;
    std::string cs = to_string(ac);
    if (t.first.trivial()) {
      r += cs;
    } else {
      if (ac != 1) r += cs + "*";
      r += to_string(t.first);
    }
  }
  return r;
}

LogESum d_esum(const LogESum& s) {
  LogESum out;
  for (auto& t : s.terms()) {
    // Leibniz over the factors of the monomial.
    for (auto& e : t.first.entries()) {
      const EKey& k = e.first;
      const Rational& a = e.second;
      if (k.kind == Gen::E) {
        // d(E^{(d)}(u)^a) = a E^{(d)}(u)^{a-1} E^{(d+1)}(u)
        EMonomial m = t.first;
        m.add(k, -1);
        m.add(e_key(k.d + 1, k.var, k.m), 1);
        out.add_term(m, t.second * a);
      } else {
        // d(log E'(u)^a) = a log E'(u)^{a-1} E''(u)/E'(u)
        EMonomial m = t.first;
        m.add(k, -1);
        m.add(e_key(2, k.var, k.m), 1);
        m.add(e_key(1, k.var, k.m), -1);
        out.add_term(m, t.second * a);
      }
    }
  }
  return out;
}

}  // namespace tx
