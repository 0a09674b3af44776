#include "tx/hseries.hpp"

#include <algorithm>
#include <queue>

namespace tx {

void HPoly::add(const HMonomial& m, const Rational& c) {
  if (c == 0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const HTerm& t, const HMonomial& k) {
    return cmp_H(t.m, k) == Cmp::Greater;
  });
  if (it != terms_.end() && it->m == m) {
    it->c += c;
    if (it->c == 0) terms_.erase(it);
  } else {
    terms_.insert(it, HTerm{c, m});
  }
}

HPoly HPoly::operator+(const HPoly& o) const {
  HPoly r = *this;
  for (auto& t : o.terms_) r.add(t.m, t.c);
  return r;
}

HPoly HPoly::operator-(const HPoly& o) const {
  HPoly r = *this;
  for (auto& t : o.terms_) r.add(t.m, -t.c);
  return r;
}

HPoly HPoly::operator*(const HPoly& o) const {
  HPoly r;
  for (auto& a : terms_)
    for (auto& b : o.terms_) r.add(a.m.mul(b.m), a.c * b.c);
  return r;
}

HPoly HPoly::scaled(const Rational& c) const {
  HPoly r;
  if (c == 0) return r;
  for (auto& t : terms_) r.terms_.push_back(HTerm{t.c * c, t.m});
  return r;
}

HPoly HPoly::mul_monomial(const HMonomial& m, const Rational& c) const {
  HPoly r;
  if (c == 0) return r;
  for (auto& t : terms_) r.terms_.push_back(HTerm{t.c * c, t.m.mul(m)});
  return r;
}

HPoly HPoly::pow_nat(long n) const {
  if (n < 0) throw DomainError("HPoly::pow_nat: negative power");
  HPoly r(1);
  HPoly base = *this;
  while (n > 0) {
    if (n & 1) r = r * base;
    base = base * base;
    n >>= 1;
  }
  return r;
}

std::string HPoly::str() const {
  if (terms_.empty()) return "0";
  std::string r;
  bool first = true;
  for (auto& t : terms_) {
    Rational c = t.c;
    if (first) {
      if (c < 0) r += "-";
    } else {
      r += c < 0 ? " - " : " + ";
    }
    first = false;
    Rational ac = c < 0 ? Rational(-c) : c;
    if (t.m.trivial()) {
      r += to_string(ac);
    } else {
      if (ac != 1) r += to_string(ac) + "*";
      r += to_string(t.m);
    }
  }
  return r;
}

namespace {
thread_local long long g_budget_limit = 0;
thread_local long long g_budget_used = 0;
constexpr long long kDefaultBudget = 4'000'000;
}  // namespace

ExpansionBudget::ExpansionBudget(long long steps) {
  saved_limit_ = g_budget_limit;
  saved_used_ = g_budget_used;
  g_budget_limit = steps;
  g_budget_used = 0;
}

ExpansionBudget::~ExpansionBudget() {
  g_budget_limit = saved_limit_;
  g_budget_used = saved_used_;
}

void ExpansionBudget::charge() {
  long long limit = g_budget_limit > 0 ? g_budget_limit : kDefaultBudget;
  if (++g_budget_used > limit)
    throw BudgetExceeded("series expansion budget exceeded (" + std::to_string(limit) + " steps)");
}

long long ExpansionBudget::used() { return g_budget_used; }


const HPoly& Graded::level(int g) {
  static const HPoly empty;
  if (g < 0 || (max_grade >= 0 && g > max_grade)) return empty;
  while (static_cast<int>(memo_.size()) <= g) {
    ExpansionBudget::charge();
    memo_.push_back(compute(static_cast<int>(memo_.size())));
  }
  return memo_[static_cast<size_t>(g)];
}

int tail_grade(const HMonomial& m) {
  Rational g = 0;
  for (auto& e : m.entries()) {
    if (e.first.d == 0) throw DomainError("graded tail: unexpected E_0 factor");
    if (e.first.d == 1) g -= e.second;
  }
  if (!is_natural(g)) throw DomainError("graded tail: non-natural grade");
  return static_cast<int>(numerator(g));
}

namespace {

// star derivation on a finite H polynomial
HPoly hpoly_star_deriv(const HPoly& p) {
  HPoly out;
  for (auto& t : p.terms()) {
    for (auto& e : t.m.entries()) {
      HMonomial m = t.m;
      m.add(HKey{e.first.var, e.first.m, e.first.d + 1}, 1);
      out.add(m, t.c * e.second);
    }
  }
  return out;
}

class GradedPoly final : public Graded {
 public:
  explicit GradedPoly(const HPoly& p) {
    int mx = 0;
    for (auto& t : p.terms()) {
      int g = tail_grade(t.m);
      if (static_cast<int>(levels_.size()) <= g) levels_.resize(static_cast<size_t>(g) + 1);
      levels_[static_cast<size_t>(g)].add(t.m, t.c);
      mx = std::max(mx, g);
    }
    max_grade = mx;
  }

 private:
  HPoly compute(int g) override {
    if (g < static_cast<int>(levels_.size())) return levels_[static_cast<size_t>(g)];
    return HPoly{};
  }
  std::vector<HPoly> levels_;
};

class GradedMul final : public Graded {
 public:
  GradedMul(GPtr a, GPtr b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_->max_grade >= 0 && b_->max_grade >= 0)
      max_grade = a_->max_grade + b_->max_grade;
  }

 private:
  HPoly compute(int g) override {
    HPoly r;
    for (int i = 0; i <= g; ++i) {
      if (a_->max_grade >= 0 && i > a_->max_grade) break;
      if (b_->max_grade >= 0 && g - i > b_->max_grade) continue;
      r = r + a_->level(i) * b_->level(g - i);
    }
    return r;
  }
  GPtr a_, b_;
};

class GradedSum final : public Graded {
 public:
  GradedSum(GPtr a, GPtr b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_->max_grade >= 0 && b_->max_grade >= 0)
      max_grade = std::max(a_->max_grade, b_->max_grade);
  }

 private:
  HPoly compute(int g) override { return a_->level(g) + b_->level(g); }
  GPtr a_, b_;
};

class GradedBinom final : public Graded {
 public:
  GradedBinom(Rational a, GPtr u) : a_(std::move(a)), u_(std::move(u)) {
    if (!u_->level(0).zero()) throw DomainError("graded binom tail: base has a grade-0 part");
    if (is_natural(a_) && u_->max_grade >= 0)
      max_grade = static_cast<int>(numerator(a_)) * u_->max_grade;
  }

  const Rational& exponent() const { return a_; }
  const GPtr& base() const { return u_; }

 private:
  Graded& power(size_t k) {
    if (pows_.empty()) pows_.push_back(graded_poly(HPoly(1)));
    while (pows_.size() <= k) pows_.push_back(std::make_shared<GradedMul>(pows_.back(), u_));
    return *pows_[k];
  }

  HPoly compute(int g) override {
    if (g == 0) return HPoly(1);
    HPoly r;
    long kmax = g;
    if (is_natural(a_)) kmax = std::min<long>(kmax, static_cast<long>(numerator(a_)));
    for (long k = 1; k <= kmax; ++k) {
      Rational c = binom(a_, k);
      if (c == 0) continue;
      r = r + power(static_cast<size_t>(k)).level(g).scaled(c);
    }
    return r;
  }

  Rational a_;
  GPtr u_;
  std::vector<GPtr> pows_;
};

class GradedDerivDiv final : public Graded {
 public:
  GradedDerivDiv(GPtr s, HKey div) : s_(std::move(s)), div_(std::move(div)) {
    max_grade = s_->max_grade;
  }

 private:
  HPoly compute(int g) override {
    HMonomial d;
    d.add(div_, -1);
    return hpoly_star_deriv(s_->level(g)).mul_monomial(d);
  }
  GPtr s_;
  HKey div_;
};

}  // namespace

GPtr graded_poly(const HPoly& p) { return std::make_shared<GradedPoly>(p); }
GPtr graded_add(GPtr a, GPtr b) { return std::make_shared<GradedSum>(std::move(a), std::move(b)); }
GPtr graded_binom(const Rational& a, GPtr u) {
  return std::make_shared<GradedBinom>(a, std::move(u));
}
GPtr graded_deriv_div(GPtr s, const HKey& div) {
  return std::make_shared<GradedDerivDiv>(std::move(s), div);
}

GPtr graded_mul(GPtr a, GPtr b) {
  // binomial tails over the same shared base combine exponents, which keeps
  // secretly-finite products finitely declared
  auto* ba = dynamic_cast<GradedBinom*>(a.get());
  auto* bb = dynamic_cast<GradedBinom*>(b.get());
  if (ba && bb && ba->base() == bb->base()) {
    Rational e = ba->exponent() + bb->exponent();
    if (e == 0) return graded_poly(HPoly(1));
    return graded_binom(e, ba->base());
  }
  return std::make_shared<GradedMul>(std::move(a), std::move(b));
}


bool SeriesNode::has_term(size_t i) {
  while (cache_.size() <= i) {
    if (exhausted_) return false;
    if (!produce()) {
      exhausted_ = true;
      return cache_.size() > i;
    }
  }
  return true;
}

namespace {

class FiniteNode final : public SeriesNode {
 public:
  explicit FiniteNode(HPoly p) {
    for (auto& t : p.terms()) cache_.push_back(t);
    exhausted_ = true;
  }

 protected:
  bool produce() override { return false; }
};

class ScaleNode final : public SeriesNode {
 public:
  ScaleNode(Rational c, HMonomial m, HSeries inner)
      : c_(std::move(c)), m_(std::move(m)), inner_(std::move(inner)) {}

 protected:
  bool produce() override {
    ExpansionBudget::charge();
    size_t i = cache_.size();
    if (!inner_->has_term(i)) return false;
    const HTerm& t = inner_->term(i);
    cache_.push_back(HTerm{t.c * c_, t.m.mul(m_)});
    return true;
  }

 private:
  Rational c_;
  HMonomial m_;
  HSeries inner_;
};

class SumNode final : public SeriesNode {
 public:
  explicit SumNode(std::vector<HSeries> ch) : ch_(std::move(ch)), pos_(ch_.size(), 0) {}

 protected:
  bool produce() override {
    for (;;) {
      ExpansionBudget::charge();
      // find the largest head monomial among children
      const HMonomial* best = nullptr;
      for (size_t k = 0; k < ch_.size(); ++k) {
        if (!ch_[k]->has_term(pos_[k])) continue;
        const HMonomial& m = ch_[k]->term(pos_[k]).m;
        if (!best || cmp_H(m, *best) == Cmp::Greater) best = &m;
      }
      if (!best) return false;
      HMonomial m = *best;  // copy: advancing children may invalidate
      Rational c = 0;
      for (size_t k = 0; k < ch_.size(); ++k) {
        if (!ch_[k]->has_term(pos_[k])) continue;
        if (ch_[k]->term(pos_[k]).m == m) {
          c += ch_[k]->term(pos_[k]).c;
          ++pos_[k];
        }
      }
      if (c != 0) {
        cache_.push_back(HTerm{c, m});
        return true;
      }
    }
  }

 private:
  std::vector<HSeries> ch_;
  std::vector<size_t> pos_;
};

// Frontier enumeration of pairwise products. Entry (i,j) has canonical
// parent (i,j-1), or (i-1,0) when j==0, so each pair is visited once and
// parents always dominate children.
class ProdNode final : public SeriesNode {
 public:
  ProdNode(HSeries a, HSeries b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_->has_term(0) && b_->has_term(0)) push(0, 0);
  }

 protected:
  struct Entry {
    HMonomial m;
    size_t i, j;
  };

  bool produce() override {
    for (;;) {
      ExpansionBudget::charge();
      if (heap_.empty()) return false;
      HMonomial m = heap_.front().m;
      Rational c = 0;
      while (!heap_.empty() && heap_.front().m == m) {
        Entry e = pop();
        c += a_->term(e.i).c * b_->term(e.j).c;
        if (b_->has_term(e.j + 1)) push(e.i, e.j + 1);
        if (e.j == 0 && a_->has_term(e.i + 1)) push(e.i + 1, 0);
      }
      if (c != 0) {
        cache_.push_back(HTerm{c, m});
        return true;
      }
    }
  }

 private:
  void push(size_t i, size_t j) {
    heap_.push_back(Entry{a_->term(i).m.mul(b_->term(j).m), i, j});
    std::push_heap(heap_.begin(), heap_.end(), &entry_less);
  }
  Entry pop() {
    std::pop_heap(heap_.begin(), heap_.end(), &entry_less);
    Entry e = heap_.back();
    heap_.pop_back();
    return e;
  }

  static bool entry_less(const Entry& x, const Entry& y) { return h_less(x.m, y.m); }

  HSeries a_, b_;
  std::vector<Entry> heap_;  // max-heap on monomials
};

// sum_k binom(a,k) u^k over the multiset monoid of u's terms. States are
// nonincreasing index sequences; the canonical parent drops or decrements
// the last index, so each multiset appears exactly once and parents
// dominate children (all u-monomials are < 1).
class BinomNode final : public SeriesNode {
 public:
  BinomNode(Rational a, HSeries u) : a_(std::move(a)), u_(std::move(u)) {
    heap_.push_back(Entry{HMonomial{}, {}});
  }

 protected:
  struct Entry {
    HMonomial m;
    std::vector<uint32_t> idx;  // nonincreasing
  };

  bool produce() override {
    for (;;) {
      ExpansionBudget::charge();
      if (heap_.empty()) return false;
      HMonomial m = heap_.front().m;
      Rational c = 0;
      while (!heap_.empty() && heap_.front().m == m) {
        Entry e = pop();
        c += coeff(e);
        expand(e);
      }
      if (c != 0) {
        cache_.push_back(HTerm{c, m});
        return true;
      }
    }
  }

 private:
  const HTerm& uterm(size_t i) {
    while (checked_ <= i) {
      if (!u_->has_term(checked_)) throw DomainError("binom tail: base series exhausted unexpectedly");
      if (cmp_H(u_->term(checked_).m, HMonomial{}) != Cmp::Less)
        throw DomainError("binom tail requires all base monomials < 1");
      ++checked_;
    }
    return u_->term(i);
  }

  Rational coeff(const Entry& e) {
    long k = static_cast<long>(e.idx.size());
    Rational r = binom(a_, k);
    if (r == 0) return 0;
    // multinomial k! / prod(mult!)
    Integer fact = 1;
    for (long i = 2; i <= k; ++i) fact *= i;
    size_t i = 0;
    while (i < e.idx.size()) {
      size_t j = i;
      while (j < e.idx.size() && e.idx[j] == e.idx[i]) ++j;
      Integer mf = 1;
      for (size_t t = 2; t <= j - i; ++t) mf *= static_cast<long>(t);
      fact /= mf;
      r *= pow_int(uterm(e.idx[i]).c, static_cast<long>(j - i));
      i = j;
    }
    return r * Rational(fact);
  }

  void expand(const Entry& e) {
    bool nat = is_natural(a_);
    long k = static_cast<long>(e.idx.size());
    // append a factor u[0]
    if (!(nat && Rational(k) >= a_) && u_->has_term(0)) {
      Entry c = e;
      c.idx.push_back(0);
      c.m = e.m.mul(uterm(0).m);
      heap_.push_back(std::move(c));
      std::push_heap(heap_.begin(), heap_.end(), &entry_less);
    }
    // increment the last index
    if (!e.idx.empty()) {
      uint32_t last = e.idx.back();
      bool ok = e.idx.size() == 1 || e.idx[e.idx.size() - 2] >= last + 1;
      if (ok && u_->has_term(last + 1)) {
        Entry c = e;
        c.idx.back() = last + 1;
        c.m = e.m.mul(uterm(last).m.inverse()).mul(uterm(last + 1).m);
        heap_.push_back(std::move(c));
        std::push_heap(heap_.begin(), heap_.end(), &entry_less);
      }
    }
  }

  Entry pop() {
    std::pop_heap(heap_.begin(), heap_.end(), &entry_less);
    Entry e = std::move(heap_.back());
    heap_.pop_back();
    return e;
  }

  static bool entry_less(const Entry& x, const Entry& y) { return h_less(x.m, y.m); }

  Rational a_;
  HSeries u_;
  size_t checked_ = 0;
  std::vector<Entry> heap_;
};

// Union of images of inner's terms; requires the images' leading monomials
// to follow inner's emission order (the order-preservation corollary).
class MappedNode final : public SeriesNode {
 public:
  MappedNode(HSeries inner, std::function<HSeries(const HTerm&)> map)
      : inner_(std::move(inner)), map_(std::move(map)) {
    if (inner_->has_term(0)) {
      images_.push_back(map_(inner_->term(0)));
      if (images_[0]->has_term(0)) push(0, 0);
    }
  }

 protected:
  struct Entry {
    HMonomial m;
    size_t i, j;
  };

  bool produce() override {
    for (;;) {
      ExpansionBudget::charge();
      if (heap_.empty()) return false;
      HMonomial m = heap_.front().m;
      Rational c = 0;
      while (!heap_.empty() && heap_.front().m == m) {
        Entry e = pop();
        c += images_[e.i]->term(e.j).c;
        if (images_[e.i]->has_term(e.j + 1)) push(e.i, e.j + 1);
        if (e.j == 0 && inner_->has_term(e.i + 1)) {
          if (images_.size() <= e.i + 1) images_.push_back(map_(inner_->term(e.i + 1)));
          if (images_[e.i + 1]->has_term(0)) push(e.i + 1, 0);
        }
      }
      if (c != 0) {
        cache_.push_back(HTerm{c, m});
        return true;
      }
    }
  }

 private:
  void push(size_t i, size_t j) {
    heap_.push_back(Entry{images_[i]->term(j).m, i, j});
    std::push_heap(heap_.begin(), heap_.end(), &entry_less);
  }
  Entry pop() {
    std::pop_heap(heap_.begin(), heap_.end(), &entry_less);
    Entry e = heap_.back();
    heap_.pop_back();
    return e;
  }

  static bool entry_less(const Entry& x, const Entry& y) { return h_less(x.m, y.m); }

  HSeries inner_;
  std::function<HSeries(const HTerm&)> map_;
  std::vector<HSeries> images_;
  std::vector<Entry> heap_;
};


class GradedSeriesNode final : public SeriesNode {
 public:
  GradedSeriesNode(Rational c, HMonomial head, GPtr g, std::optional<std::pair<Rational, int>> pos)
      : c_(std::move(c)), head_(std::move(head)), g_(std::move(g)), pos_(std::move(pos)) {}

  const Rational& coeff() const { return c_; }
  const HMonomial& head() const { return head_; }
  const GPtr& graded() const { return g_; }
  const std::optional<std::pair<Rational, int>>& pos() const { return pos_; }

 protected:
  bool produce() override {
    int empty_streak = 0;
    for (;;) {
      ExpansionBudget::charge();
      if (g_->max_grade >= 0 && next_ > g_->max_grade) return false;
      const HPoly& lvl = g_->level(next_);
      ++next_;
      if (lvl.zero()) {
        // tails built here have nonvanishing levels at bounded gaps; a long
        // empty run means an unnormalized telescoping product
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
  std::optional<std::pair<Rational, int>> pos_;
  int next_ = 0;
};


}  // namespace

HSeries series_finite(HPoly p) { return std::make_shared<FiniteNode>(std::move(p)); }

HSeries series_constant(const Rational& c) { return series_finite(HPoly(c)); }

HSeries series_scale(const Rational& c, const HMonomial& m, HSeries inner) {
  if (c == 1 && m.trivial()) return inner;
  return std::make_shared<ScaleNode>(c, m, std::move(inner));
}

HSeries series_sum(std::vector<HSeries> children) {
  if (children.empty()) return series_finite(HPoly{});
  if (children.size() == 1) return children[0];
  return std::make_shared<SumNode>(std::move(children));
}

HSeries series_add(HSeries a, HSeries b) { return series_sum({std::move(a), std::move(b)}); }

HSeries series_mul(HSeries a, HSeries b) {
  // two graded tails at the same generator position multiply gradewise
  auto* ga = dynamic_cast<GradedSeriesNode*>(a.get());
  auto* gb = dynamic_cast<GradedSeriesNode*>(b.get());
  if (ga && gb && ga->pos() && gb->pos() && *ga->pos() == *gb->pos()) {
    return series_graded(ga->coeff() * gb->coeff(), ga->head().mul(gb->head()),
                         graded_mul(ga->graded(), gb->graded()), *ga->pos());
  }
  return std::make_shared<ProdNode>(std::move(a), std::move(b));
}

HSeries series_graded(Rational c, HMonomial head, GPtr tail,
                      std::optional<std::pair<Rational, int>> pos) {
  return std::make_shared<GradedSeriesNode>(std::move(c), std::move(head), std::move(tail),
                                            std::move(pos));
}

HSeries series_prod(std::vector<HSeries> factors) {
  if (factors.empty()) return series_constant(1);
  HSeries r = factors[0];
  for (size_t i = 1; i < factors.size(); ++i) r = series_mul(r, factors[i]);
  return r;
}

HSeries series_binom_tail(const Rational& a, HSeries u) {
  return std::make_shared<BinomNode>(a, std::move(u));
}

HSeries series_mapped(HSeries inner, std::function<HSeries(const HTerm&)> map) {
  return std::make_shared<MappedNode>(std::move(inner), std::move(map));
}

std::optional<HTerm> leading_term(const HSeries& s) {
  if (!s->has_term(0)) return std::nullopt;
  return s->term(0);
}

HPoly truncate(const HSeries& s, size_t n) {
  HPoly p;
  for (size_t i = 0; i < n; ++i) {
    if (!s->has_term(i)) break;
    p.add(s->term(i).m, s->term(i).c);
  }
  return p;
}

bool truncations_equal(const HSeries& a, const HSeries& b, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    bool ha = a->has_term(i), hb = b->has_term(i);
    if (ha != hb) return false;
    if (!ha) return true;
    if (!(a->term(i) == b->term(i))) return false;
  }
  return true;
}

}  // namespace tx
