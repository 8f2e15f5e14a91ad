#include "mfrel/bounded.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace mfrel {

BigFloat::BigFloat(Precision prec)
{
    mpfr_init2(value_, prec);
    mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(long value, Precision prec)
{
    mpfr_init2(value_, prec);
    mpfr_set_si(value_, value, MPFR_RNDN);
}

BigFloat::BigFloat(double value, Precision prec)
{
    mpfr_init2(value_, prec);
    mpfr_set_d(value_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const mpz_class &value, Precision prec)
{
    mpfr_init2(value_, prec);
    mpfr_set_z(value_, value.get_mpz_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const mpq_class &value, Precision prec)
{
    mpfr_init2(value_, prec);
    mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat &other)
{
    mpfr_init2(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat &&other) noexcept
{
    mpfr_init2(value_, MPFR_PREC_MIN);
    mpfr_swap(value_, other.value_);
}

BigFloat &BigFloat::operator=(const BigFloat &other)
{
    if (this != &other) {
        mpfr_set_prec(value_, other.precision());
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

BigFloat &BigFloat::operator=(BigFloat &&other) noexcept
{
    mpfr_swap(value_, other.value_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

double BigFloat::abs_upper() const
{
    mpfr_t tmp;
    mpfr_init2(tmp, precision());
    mpfr_abs(tmp, value_, MPFR_RNDN);
    const double d = mpfr_get_d(tmp, MPFR_RNDU);
    mpfr_clear(tmp);
    return d;
}

std::string BigFloat::to_string(int digits) const
{
    if (mpfr_nan_p(value_)) {
        return "nan";
    }
    std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, value_);
    return std::string(buf.data());
}

BigFloat BigFloat::pi(Precision prec)
{
    BigFloat r(prec);
    mpfr_const_pi(r.get(), MPFR_RNDN);
    return r;
}

namespace {

Precision max_prec(const BigFloat &a, const BigFloat &b) { return std::max(a.precision(), b.precision()); }

} // namespace

BigFloat operator-(const BigFloat &a)
{
    BigFloat r(a.precision());
    mpfr_neg(r.get(), a.get(), MPFR_RNDN);
    return r;
}

BigFloat operator+(const BigFloat &a, const BigFloat &b)
{
    BigFloat r(max_prec(a, b));
    mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}

BigFloat operator-(const BigFloat &a, const BigFloat &b)
{
    BigFloat r(max_prec(a, b));
    mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}

BigFloat operator*(const BigFloat &a, const BigFloat &b)
{
    BigFloat r(max_prec(a, b));
    mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}

BigFloat operator/(const BigFloat &a, const BigFloat &b)
{
    BigFloat r(max_prec(a, b));
    mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}

BigFloat abs(const BigFloat &a)
{
    BigFloat r(a.precision());
    mpfr_abs(r.get(), a.get(), MPFR_RNDN);
    return r;
}

double half_ulp(const BigFloat &x)
{
    if (x.is_zero()) {
        return 0.0;
    }
    const long e = mpfr_get_exp(x.get()) - static_cast<long>(x.precision()) - 1;
    const double h = std::ldexp(1.0, static_cast<int>(std::clamp(e, -2000L, 2000L)));
    return h > 0.0 ? h : DBL_TRUE_MIN;
}

double round_up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

double add_up(double a, double b) { return round_up(a + b); }

double mul_up(double a, double b) { return round_up(a * b); }

bool BoundedReal::contains(double x) const
{
    BigFloat d(x, value.precision() + 64);
    mpfr_sub(d.get(), d.get(), value.get(), MPFR_RNDN);
    // The subtraction at +64 bits is exact for doubles near value; allow one ulp slack otherwise.
    return d.abs_upper() <= add_up(abs_error, half_ulp(d));
}

BoundedReal exact(long value, Precision prec) { return {BigFloat(value, prec), 0.0}; }

BoundedReal add(const BoundedReal &a, const BoundedReal &b, Precision prec)
{
    BigFloat r(prec);
    mpfr_add(r.get(), a.value.get(), b.value.get(), MPFR_RNDN);
    const double err = add_up(add_up(a.abs_error, b.abs_error), half_ulp(r));
    return {std::move(r), err};
}

BoundedReal sub(const BoundedReal &a, const BoundedReal &b, Precision prec)
{
    BigFloat r(prec);
    mpfr_sub(r.get(), a.value.get(), b.value.get(), MPFR_RNDN);
    const double err = add_up(add_up(a.abs_error, b.abs_error), half_ulp(r));
    return {std::move(r), err};
}

BoundedReal mul(const BoundedReal &a, const BoundedReal &b, Precision prec)
{
    BigFloat r(prec);
    mpfr_mul(r.get(), a.value.get(), b.value.get(), MPFR_RNDN);
    double err = mul_up(a.value.abs_upper(), b.abs_error);
    err = add_up(err, mul_up(b.value.abs_upper(), a.abs_error));
    err = add_up(err, mul_up(a.abs_error, b.abs_error));
    err = add_up(err, half_ulp(r));
    return {std::move(r), err};
}

BoundedReal mul(const BoundedReal &a, long b, Precision prec)
{
    BigFloat r(prec);
    mpfr_mul_si(r.get(), a.value.get(), b, MPFR_RNDN);
    const double err = add_up(mul_up(a.abs_error, std::fabs(static_cast<double>(b)) * (1.0 + DBL_EPSILON)),
                              half_ulp(r));
    return {std::move(r), err};
}

BoundedReal div(const BoundedReal &a, long b, Precision prec)
{
    BigFloat r(prec);
    mpfr_div_si(r.get(), a.value.get(), b, MPFR_RNDN);
    const double err =
        add_up(round_up(a.abs_error / (std::fabs(static_cast<double>(b)) * (1.0 - DBL_EPSILON))), half_ulp(r));
    return {std::move(r), err};
}

BoundedReal neg(const BoundedReal &a) { return {-a.value, a.abs_error}; }

double BoundedComplex::max_error() const { return std::max(re.abs_error, im.abs_error); }

BoundedComplex add(const BoundedComplex &a, const BoundedComplex &b, Precision prec)
{
    return {add(a.re, b.re, prec), add(a.im, b.im, prec)};
}

BoundedComplex mul(const BoundedComplex &a, const BoundedComplex &b, Precision prec)
{
    auto re = sub(mul(a.re, b.re, prec), mul(a.im, b.im, prec), prec);
    auto im = add(mul(a.re, b.im, prec), mul(a.im, b.re, prec), prec);
    return {std::move(re), std::move(im)};
}

BoundedComplex mul(const BoundedComplex &a, const BoundedReal &b, Precision prec)
{
    return {mul(a.re, b, prec), mul(a.im, b, prec)};
}

BoundedComplex conj(const BoundedComplex &a) { return {a.re, neg(a.im)}; }

} // namespace mfrel
