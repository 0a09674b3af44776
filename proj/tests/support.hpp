#ifndef TX_TESTS_SUPPORT_HPP
#define TX_TESTS_SUPPORT_HPP

#include <random>

#include "tx/logesum.hpp"
#include "tx/monomial.hpp"

namespace tx::testing {

// Deterministic generators for property tests.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  long uniform(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(eng_);
  }

  Rational rational(long num_range = 6, long den_range = 4) {
    long n = uniform(-num_range, num_range);
    long d = uniform(1, den_range);
    return Rational(n, d);
  }

  Rational nonzero_rational(long num_range = 6, long den_range = 4) {
    Rational r;
    do {
      r = rational(num_range, den_range);
    } while (r == 0);
    return r;
  }

  // random G-monomial, shift 0, derivative order <= dmax, over given offsets
  EMonomial g_monomial(const std::vector<Rational>& vars, int dmax, int max_factors = 3) {
    EMonomial m;
    long nf = uniform(1, max_factors);
    for (long i = 0; i < nf; ++i) {
      const Rational& v = vars[static_cast<size_t>(uniform(0, static_cast<long>(vars.size()) - 1))];
      int d = static_cast<int>(uniform(0, dmax));
      m.add(e_key(d, v), nonzero_rational(4, 3));
    }
    return m;
  }

  EMonomial gl_monomial(const std::vector<Rational>& vars, int dmax, int max_factors = 3) {
    EMonomial m = g_monomial(vars, dmax, max_factors);
    if (uniform(0, 2) == 0) {
      const Rational& v = vars[static_cast<size_t>(uniform(0, static_cast<long>(vars.size()) - 1))];
      m.add(loge1_key(v), nonzero_rational(3, 2));
    }
    return m;
  }

  LogESum log_e_sum(const std::vector<Rational>& vars, int dmax, int max_terms,
                    bool with_logs = true) {
    LogESum s;
    long nt = uniform(1, max_terms);
    for (long i = 0; i < nt; ++i) {
      EMonomial m = with_logs ? gl_monomial(vars, dmax) : g_monomial(vars, dmax);
      s.add_term(m, nonzero_rational());
    }
    return s;
  }

  // integer-exponent variant (for derivation tests)
  LogESum int_log_e_sum(const std::vector<Rational>& vars, int dmax, int max_terms) {
    LogESum s;
    long nt = uniform(1, max_terms);
    for (long i = 0; i < nt; ++i) {
      EMonomial m;
      long nf = uniform(1, 3);
      for (long j = 0; j < nf; ++j) {
        const Rational& v = vars[static_cast<size_t>(uniform(0, static_cast<long>(vars.size()) - 1))];
        int d = static_cast<int>(uniform(0, dmax));
        long e = uniform(-3, 3);
        if (e == 0) e = 1;
        m.add(e_key(d, v), e);
      }
      s.add_term(m, nonzero_rational());
    }
    return s;
  }

  // random sigma-image-shaped H-monomial: rational exponents on E0/E1,
  // natural exponents on E2..E_dmax
  HMonomial sigma_image_monomial(const std::vector<Rational>& vars, int dmax) {
    HMonomial m;
    for (auto& v : vars) {
      if (uniform(0, 1)) m.add(h_key(0, v, 0), rational(4, 3));
      if (uniform(0, 1)) m.add(h_key(1, v, 0), rational(4, 3));
      for (int d = 2; d <= dmax; ++d)
        if (uniform(0, 2) == 0) m.add(h_key(d, v, 0), uniform(0, 3));
    }
    return m;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace tx::testing

#endif
