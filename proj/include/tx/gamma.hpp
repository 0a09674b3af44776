#ifndef TX_GAMMA_HPP
#define TX_GAMMA_HPP

#include "tx/logesum.hpp"
#include "tx/monomial.hpp"
#include "tx/rewrite.hpp"

namespace tx {

// Monomial of Gamma_0 = G_X Lambda_X e_T(T_X): a group part, a log part and
// the exponential of a T_X element (zero t means no exponential factor).
struct Gamma0Monomial {
  GMonomial g;
  LogMonomial ell;
  LogESum t;

  Gamma0Monomial() = default;
  Gamma0Monomial(GMonomial g_, LogMonomial ell_, LogESum t_ = {});

  Gamma0Monomial mul(const Gamma0Monomial& o) const;
  Gamma0Monomial inverse() const;
  bool trivial() const { return g.trivial() && ell.trivial() && t.zero(); }
};

// The stand-in logarithm: reads the level-0 E_0 exponents of Lm(rho(g l)),
// i.e. the per-variable exponent sums xi of the group part, and returns
// sum_j xi_{x_j} E_0(x_j - 1) as a finite H-sum one level down.
HPoly log_hat(const EMonomial& gl, int m = 0);

// Total order of Gamma_0: with equal t parts it is the rho-leading-term
// order on G Lambda; otherwise the log-hat sum is compared against rho(t).
Cmp cmp_Gamma0(const Gamma0Monomial& a, const Gamma0Monomial& b);

bool is_small_gamma(const Gamma0Monomial& m);

}  // namespace tx

#endif
