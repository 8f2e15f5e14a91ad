#include "mfrel/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mfrel {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

int bit_length(unsigned long x)
{
    int b = 0;
    while (x != 0) {
        ++b;
        x >>= 1;
    }
    return b;
}

/// log of |t_j / t_0| for the ascending Bessel series, evaluated in double.
double log_term_ratio(long j, double log_y, double nu)
{
    return static_cast<double>(j) * log_y - std::lgamma(static_cast<double>(j) + 1.0) -
           (std::lgamma(static_cast<double>(j) + nu + 1.0) - std::lgamma(nu + 1.0));
}

// Sum_{j>=0} (-1)^{j alternate} (x/2)^{2j+nu} / (j! Gamma(j+nu+1)) for exact x >= 0.
BoundedReal ascending_series(HalfInteger nu, const BigFloat &x, bool alternate, Precision prec)
{
    if (x.sign() < 0) {
        throw std::invalid_argument("Bessel argument must be nonnegative");
    }
    if (nu < HalfInteger(0)) {
        throw std::invalid_argument("Bessel order must be nonnegative");
    }
    if (x.is_zero()) {
        return exact(nu == HalfInteger(0) ? 1 : 0, prec);
    }

    const double nu_d = nu.to_double();
    const double xd = x.to_double();
    const double log_y = 2.0 * std::log(xd / 2.0);

    // Scan the term magnitudes in double to size the working precision.
    double log_max = 0.0;
    long nterms_estimate = 0;
    for (long j = 1;; ++j) {
        const double lj = log_term_ratio(j, log_y, nu_d);
        log_max = std::max(log_max, lj);
        const double ratio = std::exp(log_y) / (static_cast<double>(j + 1) * (static_cast<double>(j) + nu_d + 1.0));
        if (ratio <= 0.5 && lj < log_max - (static_cast<double>(prec) + 16.0) * kLn2) {
            nterms_estimate = j;
            break;
        }
    }
    const long cancel_bits = alternate ? static_cast<long>(std::ceil(log_max / kLn2)) : 0;
    const Precision wp =
        prec + cancel_bits + 2 * bit_length(static_cast<unsigned long>(nterms_estimate)) + 16;

    BigFloat half_x(wp);
    mpfr_div_2ui(half_x.get(), x.get(), 1, MPFR_RNDN);
    BigFloat y(wp);
    mpfr_sqr(y.get(), half_x.get(), MPFR_RNDN);

    BigFloat term(wp);
    if (nu == HalfInteger(0)) {
        mpfr_set_ui(term.get(), 1, MPFR_RNDN);
    } else {
        BigFloat nu_f(wp), g(wp);
        mpfr_set_si(nu_f.get(), nu.twice(), MPFR_RNDN);
        mpfr_div_2ui(nu_f.get(), nu_f.get(), 1, MPFR_RNDN);
        mpfr_pow(term.get(), half_x.get(), nu_f.get(), MPFR_RNDN);
        mpfr_add_ui(nu_f.get(), nu_f.get(), 1, MPFR_RNDN);
        mpfr_gamma(g.get(), nu_f.get(), MPFR_RNDN);
        mpfr_div(term.get(), term.get(), g.get(), MPFR_RNDN);
    }

    BigFloat sum = term;
    BigFloat reference = abs(term); // |t_0| bounds |J_nu|; the sum itself bounds I_nu
    double abs_sum = term.abs_upper();
    long nterms = 1;
    BigFloat remainder(64), rho(64), tol(64);
    for (long j = 0;; ++j) {
        mpfr_mul(term.get(), term.get(), y.get(), MPFR_RNDN);
        mpfr_div_ui(term.get(), term.get(), static_cast<unsigned long>(j + 1), MPFR_RNDN);
        // divide by (j + nu + 1) = (2j + 2nu + 2) / 2
        mpfr_div_ui(term.get(), term.get(), static_cast<unsigned long>(2 * j + nu.twice() + 2), MPFR_RNDN);
        mpfr_mul_2ui(term.get(), term.get(), 1, MPFR_RNDN);
        if (alternate) {
            mpfr_neg(term.get(), term.get(), MPFR_RNDN);
        }
        mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
        abs_sum = add_up(abs_sum, term.abs_upper());
        ++nterms;

        // rho = y / ((j+2)(j+nu+2)) is the ratio |t_{j+2} / t_{j+1}| and decreases with j.
        mpfr_mul_2ui(rho.get(), y.get(), 1, MPFR_RNDU);
        mpfr_div_ui(rho.get(), rho.get(), static_cast<unsigned long>(j + 2), MPFR_RNDU);
        mpfr_div_ui(rho.get(), rho.get(), static_cast<unsigned long>(2 * j + nu.twice() + 4), MPFR_RNDU);
        if (mpfr_cmp_d(rho.get(), 0.5) > 0) {
            continue;
        }
        // remainder <= |t_{j+1}| rho / (1 - rho) <= 2 rho |t_{j+1}|
        mpfr_abs(remainder.get(), term.get(), MPFR_RNDU);
        mpfr_mul(remainder.get(), remainder.get(), rho.get(), MPFR_RNDU);
        mpfr_mul_2ui(remainder.get(), remainder.get(), 1, MPFR_RNDU);
        const BigFloat &ref = alternate ? reference : sum;
        mpfr_abs(tol.get(), ref.get(), MPFR_RNDD);
        mpfr_div_2si(tol.get(), tol.get(), static_cast<long>(prec) + 4, MPFR_RNDD);
        if (mpfr_cmp(remainder.get(), tol.get()) <= 0) {
            break;
        }
    }

    const double truncation = mpfr_get_d(remainder.get(), MPFR_RNDU);
    const double rounding =
        std::ldexp(mul_up(abs_sum, 5.0 * static_cast<double>(nterms) + 8.0), -static_cast<int>(wp));
    BigFloat value(prec);
    mpfr_set(value.get(), sum.get(), MPFR_RNDN);
    const double err = add_up(add_up(truncation, rounding), half_ulp(value));
    return {std::move(value), err};
}

/// Envelope (x/2)^mu e^{x^2/(4(mu+1))} / Gamma(mu+1) >= I_mu(x), capped by e^x.
double bessel_i_envelope(double mu, double x)
{
    if (x <= 0.0) {
        return mu == 0.0 ? 1.0 : 0.0;
    }
    const double log_env = mu * std::log(x / 2.0) + x * x / (4.0 * (mu + 1.0)) - std::lgamma(mu + 1.0);
    return round_up(std::exp(std::min(log_env, x)) * (1.0 + 1e-12));
}

void check_argument(const BoundedReal &x, HalfInteger nu)
{
    if (x.value.sign() < 0) {
        throw std::invalid_argument("Bessel argument must be nonnegative");
    }
    if (x.abs_error > 0.0 && nu > HalfInteger(0) && nu < HalfInteger(1)) {
        throw std::invalid_argument("uncertain Bessel argument requires nu = 0 or nu >= 1");
    }
}

} // namespace

BoundedReal bessel_j(HalfInteger nu, const BoundedReal &x, Precision prec)
{
    check_argument(x, nu);
    BoundedReal r = ascending_series(nu, x.value, true, prec);
    if (x.abs_error > 0.0) {
        // |J_nu'| <= 1 for nu = 0 and nu >= 1
        r.abs_error = add_up(r.abs_error, x.abs_error);
    }
    return r;
}

BoundedReal bessel_j(HalfInteger nu, double x, Precision prec)
{
    return bessel_j(nu, BoundedReal(BigFloat(x, std::max<Precision>(prec, 53)), 0.0), prec);
}

BoundedReal bessel_i(HalfInteger nu, const BoundedReal &x, Precision prec)
{
    check_argument(x, nu);
    BoundedReal r = ascending_series(nu, x.value, false, prec);
    if (x.abs_error > 0.0) {
        // I_nu' <= I_{nu-1} (nu >= 1), I_0' = I_1 <= I_0; both are increasing in x.
        const double xi = add_up(x.value.abs_upper(), x.abs_error);
        const double mu = nu == HalfInteger(0) ? 0.0 : nu.to_double() - 1.0;
        r.abs_error = add_up(r.abs_error, mul_up(x.abs_error, bessel_i_envelope(mu, xi)));
    }
    return r;
}

BoundedReal bessel_i(HalfInteger nu, double x, Precision prec)
{
    return bessel_i(nu, BoundedReal(BigFloat(x, std::max<Precision>(prec, 53)), 0.0), prec);
}

BoundedReal incomplete_gamma_upper(const BigFloat &s, const BigFloat &x, Precision prec)
{
    if (s.sign() <= 0) {
        throw std::invalid_argument("incomplete gamma needs s > 0");
    }
    if (x.sign() < 0) {
        throw std::invalid_argument("incomplete gamma needs x >= 0");
    }
    const double xd = x.to_double();
    const Precision wp = prec + 16 + bit_length(static_cast<unsigned long>(std::max(0.0, xd)) + 1);

    BigFloat twice_s(s.precision() + 1);
    mpfr_mul_2ui(twice_s.get(), s.get(), 1, MPFR_RNDN);
    const bool closed_form = mpfr_integer_p(twice_s.get()) != 0 && mpfr_fits_slong_p(twice_s.get(), MPFR_RNDN) != 0;

    BigFloat result(wp);
    double rel_units = 0.0; // relative error in units of 2^-wp

    if (!closed_form) {
        mpfr_gamma_inc(result.get(), s.get(), x.get(), MPFR_RNDN);
        rel_units = 1.0;
    } else if (x.is_zero()) {
        mpfr_gamma(result.get(), s.get(), MPFR_RNDN);
        rel_units = 1.0;
    } else if (mpfr_get_si(twice_s.get(), MPFR_RNDN) % 2 == 0) {
        // Gamma(n, x) = (n-1)! e^{-x} sum_{j<n} x^j / j!
        const long n = mpfr_get_si(twice_s.get(), MPFR_RNDN) / 2;
        BigFloat term(1L, wp), sum(1L, wp), tmp(wp);
        for (long j = 1; j < n; ++j) {
            mpfr_mul(term.get(), term.get(), x.get(), MPFR_RNDN);
            mpfr_div_ui(term.get(), term.get(), static_cast<unsigned long>(j), MPFR_RNDN);
            mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
        }
        mpfr_neg(tmp.get(), x.get(), MPFR_RNDN);
        mpfr_exp(tmp.get(), tmp.get(), MPFR_RNDN);
        mpfr_mul(result.get(), sum.get(), tmp.get(), MPFR_RNDN);
        mpfr_fac_ui(tmp.get(), static_cast<unsigned long>(n - 1), MPFR_RNDN);
        mpfr_mul(result.get(), result.get(), tmp.get(), MPFR_RNDN);
        rel_units = 3.0 * static_cast<double>(n) + 6.0;
    } else {
        // Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x)); Gamma(a+1, x) = a Gamma(a, x) + x^a e^{-x}.
        const long n = (mpfr_get_si(twice_s.get(), MPFR_RNDN) - 1) / 2;
        BigFloat t(wp), a(wp), pw(wp), ex(wp);
        mpfr_sqrt(t.get(), x.get(), MPFR_RNDN);
        mpfr_erfc(result.get(), t.get(), MPFR_RNDN);
        mpfr_const_pi(t.get(), MPFR_RNDN);
        mpfr_sqrt(t.get(), t.get(), MPFR_RNDN);
        mpfr_mul(result.get(), result.get(), t.get(), MPFR_RNDN);
        mpfr_neg(ex.get(), x.get(), MPFR_RNDN);
        mpfr_exp(ex.get(), ex.get(), MPFR_RNDN);
        for (long i = 0; i < n; ++i) {
            mpfr_set_si(a.get(), 2 * i + 1, MPFR_RNDN);
            mpfr_div_2ui(a.get(), a.get(), 1, MPFR_RNDN);
            mpfr_pow(pw.get(), x.get(), a.get(), MPFR_RNDN);
            mpfr_mul(pw.get(), pw.get(), ex.get(), MPFR_RNDN);
            mpfr_mul(result.get(), result.get(), a.get(), MPFR_RNDN);
            mpfr_add(result.get(), result.get(), pw.get(), MPFR_RNDN);
        }
        rel_units = 2.0 * xd + 2.0 * std::sqrt(xd) + 8.0 + 5.0 * static_cast<double>(n);
    }

    BigFloat value(prec);
    mpfr_set(value.get(), result.get(), MPFR_RNDN);
    const double err = add_up(std::ldexp(mul_up(result.abs_upper(), rel_units * 1.01), -static_cast<int>(wp)),
                              half_ulp(value));
    return {std::move(value), err};
}

BoundedReal incomplete_gamma_upper(double s, double x, Precision prec)
{
    return incomplete_gamma_upper(BigFloat(s, 53), BigFloat(x, 53), prec);
}

} // namespace mfrel
