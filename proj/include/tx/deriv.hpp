#ifndef TX_DERIV_HPP
#define TX_DERIV_HPP

#include "tx/hseries.hpp"
#include "tx/logesum.hpp"

namespace tx {

// Derivation E_d(x-v-m) -> E_d(x-v-m) E_{d+1}(x-v-m) extended by Leibniz and
// linearity to lazily expanded series. Exponents must be integers (the
// integer-exponent subfield carries the derivation).
HSeries d_hseries(const HSeries& s);

// Same rule on a finite H-polynomial.
HPoly d_hpoly(const HPoly& p);

// truncate(sigma(d/dx s), order) == truncate(d(sigma s), order); the sum must
// have integer exponents so both sides stay in the integer subfield.
bool check_sigma_commutes(const LogESum& s, size_t order);

}  // namespace tx

#endif
