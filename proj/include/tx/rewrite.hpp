#ifndef TX_REWRITE_HPP
#define TX_REWRITE_HPP

#include <optional>

#include "tx/hseries.hpp"
#include "tx/logesum.hpp"

namespace tx {

// Complete Bell polynomial B_d with arguments E'(x-var-m), ..., E^{(d)}(x-var-m),
// satisfying E^{(d)}(u+1) = E(u+1) B_d(u).
LogESum bell(int d, const Rational& var = 0, int m = 0);

// sigma image of one generator power E^{(d)}(x-var-m)^a as a series in the
// E_* basis at the same level.
HSeries sigma_generator(const EKey& k, const Rational& a);

// sigma: k[G] -> k((H)), generator-local; log generators are rejected.
HSeries sigma0(const LogESum& s);

// epsilon_d relocated so that its generators sit at (var, m); the canonical
// instance (d at level 1) is memoized.
HSeries epsilon_series(int d, const Rational& var = 0, int m = 1);

// One-level rewrite nu_m: E_d(x-var-m) for d >= 1 moves to level m+1
// (integer exponents required on E_{d>=2}); E_0 generators pass through.
HSeries nu_term_image(const HTerm& t, int m);
HSeries nu_rewrite(const HSeries& s, int m);

// rho = nu . sigma extended to log generators by the binomial tail in
// E_1/E_0; input must live on a single shift level m, output at m+1.
HSeries rho0(const LogESum& s);

struct SignWitness {
  Rational c;
  HMonomial m;
  friend bool operator==(const SignWitness& a, const SignWitness& b) {
    return a.c == b.c && a.m == b.m;
  }
};

// The finite data defining Init(s): per selected index the log part, the
// finite initial profile subsum t_i of sigma(s_i), and Lm(rho(l_i)).
struct InitProfile {
  struct Part {
    EMonomial ell;
    HPoly t;
    HMonomial ell_lm;
  };
  std::vector<Part> parts;
  HSeries init;  // sum over parts of nu(t_i) * Lm(rho(l_i))
};

InitProfile init_profile(const LogESum& s);

// Leading term of rho(s) found by the constructive search of the
// injectivity proofs: enumerate candidate monomials of Init(s) in
// decreasing order with exact merged coefficients, stop at the first
// nonzero one. nullopt iff s == 0 structurally.
std::optional<SignWitness> sign_witness(const LogESum& s);
int sign(const LogESum& s);

// Extension to sums whose generators live on several shift levels: each
// generator is rewritten down to the deepest level through a nu chain.
std::optional<SignWitness> sign_witness_multi(const LogESum& s);
int sign_multi(const LogESum& s);

// Expansion work used by the most recent witness search.
long long last_witness_steps();

// phi_{m,0} image of a single generator power: e(e_arg) * factor *
// sum_n binom(tail_a, n) tail_u^n (the tail is 1 when tail_u is zero).
struct PhiImage {
  LogESum e_arg;
  LogESum factor;
  Rational tail_a = 0;
  LogESum tail_u;
};

PhiImage phi_generator(const EKey& k, const Rational& a);

// Finite phi image for natural-exponent sums whose tower parts cancel
// (xi = 0 per variable), e.g. elements of T_X intersected with k[G_X].
LogESum phi_finite(const LogESum& s);

// Independent finite-truncation expansion of rho(s): every infinite tail is
// cut at the given order and the result is computed with plain polynomial
// arithmetic; the first surviving term is returned. Used to cross-check
// sign_witness.
std::optional<SignWitness> truncation_oracle(const LogESum& s, int order);

extern int g_default_truncation_order;  // CLI-tunable; default 30

}  // namespace tx

#endif
