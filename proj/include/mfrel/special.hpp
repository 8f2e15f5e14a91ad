#pragma once

// Error-bounded J-Bessel, I-Bessel and upper incomplete gamma.
//
// The Bessel functions are summed from their ascending series at a working
// precision raised far enough to absorb cancellation; abs_error covers the
// series remainder, every rounding and any radius carried in by the argument.

#include "mfrel/bounded.hpp"
#include "mfrel/exactarith.hpp"

namespace mfrel {

/// J_nu(x) for nu in (1/2)Z, nu >= 0 and x >= 0. A nonzero radius on x requires nu = 0 or nu >= 1.
BoundedReal bessel_j(HalfInteger nu, const BoundedReal &x, Precision prec = kDefaultPrecision);
BoundedReal bessel_j(HalfInteger nu, double x, Precision prec = kDefaultPrecision);

/// I_nu(x), same conventions as bessel_j.
BoundedReal bessel_i(HalfInteger nu, const BoundedReal &x, Precision prec = kDefaultPrecision);
BoundedReal bessel_i(HalfInteger nu, double x, Precision prec = kDefaultPrecision);

/// Gamma(s, x) for s > 0, x >= 0. Integral and half-integral s use closed forms;
/// other s defer to MPFR's correctly rounded gamma_inc.
BoundedReal incomplete_gamma_upper(const BigFloat &s, const BigFloat &x, Precision prec = kDefaultPrecision);
BoundedReal incomplete_gamma_upper(double s, double x, Precision prec = kDefaultPrecision);

} // namespace mfrel
