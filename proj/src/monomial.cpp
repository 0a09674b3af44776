#include "tx/monomial.hpp"

#include <algorithm>
#include <sstream>

namespace tx {

Cmp cmp_H(const HMonomial& a, const HMonomial& b) {
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
      return ea[i].second > 0 ? Cmp::Greater : Cmp::Less;
    }
    if (i == ea.size() || eb[j].first < ea[i].first) {
      return eb[j].second > 0 ? Cmp::Less : Cmp::Greater;
    }
    if (ea[i].second != eb[j].second)
      return ea[i].second > eb[j].second ? Cmp::Greater : Cmp::Less;
    ++i;
    ++j;
  }
  return Cmp::Equal;
}

Cmp cmp_H(const VarContext& ctx, const HMonomial& a, const HMonomial& b) {
  for (auto* m : {&a, &b})
    for (auto& e : m->entries())
      if (!ctx.has(e.first.var)) throw DomainError("cmp_H: variable not in context");
  return cmp_H(a, b);
}

bool h_less(const HMonomial& a, const HMonomial& b) {
  return cmp_H(a, b) == Cmp::Less;
}

SmallnessProfile smallness_profile(const EMonomial& g) {
  SmallnessProfile p;
  for (auto& e : g.entries()) {
    if (e.first.kind != Gen::E) continue;
    bool found = false;
    for (auto& q : p.xi)
      if (q.first == e.first.var) {
        q.second += e.second;
        found = true;
      }
    if (!found) p.xi.push_back({e.first.var, e.second});
  }
  return p;
}

bool is_small(const EMonomial& g) {
  for (auto& q : smallness_profile(g).xi)
    if (q.second != 0) return false;
  return true;
}

bool g_part_only(const EMonomial& m) {
  for (auto& e : m.entries())
    if (e.first.kind != Gen::E) return false;
  return true;
}

bool log_part_only(const EMonomial& m) {
  for (auto& e : m.entries())
    if (e.first.kind != Gen::LogE1) return false;
  return true;
}

EMonomial g_part(const EMonomial& m) {
  EMonomial r;
  for (auto& e : m.entries())
    if (e.first.kind == Gen::E) r.add(e.first, e.second);
  return r;
}

EMonomial log_part(const EMonomial& m) {
  EMonomial r;
  for (auto& e : m.entries())
    if (e.first.kind == Gen::LogE1) r.add(e.first, e.second);
  return r;
}

bool is_tx_monomial(const EMonomial& m) {
  if (m.trivial()) return false;  // constants are excluded
  // single shift level
  std::optional<int> level;
  for (auto& e : m.entries()) {
    if (level && e.first.m != *level) return false;
    level = e.first.m;
  }
  // per (variable) block: E exponent 0, E' exponent = -(sum of higher),
  // E^{(d>=2)} and log E' exponents natural
  struct Block {
    Rational e0 = 0, e1 = 0, hi = 0, lg = 0;
    bool any = false;
  };
  std::map<Rational, Block> blocks;
  for (auto& e : m.entries()) {
    Block& b = blocks[e.first.var];
    b.any = true;
    if (e.first.kind == Gen::LogE1) {
      if (!is_natural(e.second)) return false;
      b.lg += e.second;
    } else if (e.first.d == 0) {
      b.e0 += e.second;
    } else if (e.first.d == 1) {
      b.e1 += e.second;
    } else {
      if (!is_natural(e.second)) return false;
      b.hi += e.second;
    }
  }
  Rational total_nonlog = 0, total_log = 0;
  for (auto& [v, b] : blocks) {
    if (b.e0 != 0) return false;
    if (b.e1 != -b.hi) return false;
    total_nonlog += b.hi;
    total_log += b.lg;
  }
  if (total_nonlog == 0 && total_log == 0) return false;
  // a bare c * log E'(x) is excluded
  if (total_nonlog == 0 && total_log == 1) return false;
  return true;
}

namespace {

std::string arg_string(const Rational& var, int m) {
  Rational s = var + m;
  if (s == 0) return "x";
  if (s > 0) return "x-" + to_string(s);
  return "x+" + to_string(-s);
}

std::string exp_suffix(const Rational& e) {
  if (e == 1) return "";
  return "^" + to_string(e);
}

}  // namespace

std::string to_string(const EKey& k) {
  if (k.kind == Gen::LogE1) return "logE'(" + arg_string(k.var, k.m) + ")";
  std::string head = "E";
  if (k.d >= 1 && k.d <= 3)
    head += std::string(static_cast<size_t>(k.d), '\'');
  else if (k.d > 3)
    head += "^(" + std::to_string(k.d) + ")";
  return head + "(" + arg_string(k.var, k.m) + ")";
}

std::string to_string(const HKey& k) {
  return "E" + std::to_string(k.d) + "(" + arg_string(k.var, k.m) + ")";
}

template <class M>
static std::string mono_string(const M& m) {
  if (m.trivial()) return "1";
  std::string r;
  bool first = true;
  for (auto& e : m.entries()) {
    if (!first) r += "*";
    first = false;
    r += to_string(e.first) + exp_suffix(e.second);
  }
  return r;
}

std::string to_string(const EMonomial& m) { return mono_string(m); }

std::string to_string(const HMonomial& m) {
  // entries are already in comparison order, largest factors first
  return mono_string(m);
}

}  // namespace tx
