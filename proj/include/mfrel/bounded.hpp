#pragma once

// Multiprecision reals with a rigorous absolute error radius.
//
// BigFloat is a thin RAII owner of an mpfr_t that carries its own precision.
// BoundedReal pairs a BigFloat midpoint with a double radius that is always
// rounded upward, so the true value lies in [value - abs_error, value + abs_error].

#include <mpfr.h>
#include <gmpxx.h>

#include <string>

namespace mfrel {

using Precision = mpfr_prec_t;

inline constexpr Precision kDefaultPrecision = 128;

class BigFloat {
public:
    explicit BigFloat(Precision prec = kDefaultPrecision);
    BigFloat(long value, Precision prec);
    BigFloat(double value, Precision prec);
    BigFloat(const mpz_class &value, Precision prec);
    BigFloat(const mpq_class &value, Precision prec);

    BigFloat(const BigFloat &other);
    BigFloat(BigFloat &&other) noexcept;
    BigFloat &operator=(const BigFloat &other);
    BigFloat &operator=(BigFloat &&other) noexcept;
    ~BigFloat();

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }

    Precision precision() const { return mpfr_get_prec(value_); }
    int sign() const { return mpfr_sgn(value_); }
    bool is_zero() const { return mpfr_zero_p(value_) != 0; }

    double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
    /// |x| rounded toward +infinity.
    double abs_upper() const;

    /// Scientific notation with `digits` significant decimal digits.
    std::string to_string(int digits = 20) const;

    static BigFloat pi(Precision prec);

private:
    mpfr_t value_;
};

BigFloat operator-(const BigFloat &a);
BigFloat operator+(const BigFloat &a, const BigFloat &b);
BigFloat operator-(const BigFloat &a, const BigFloat &b);
BigFloat operator*(const BigFloat &a, const BigFloat &b);
BigFloat operator/(const BigFloat &a, const BigFloat &b);
BigFloat abs(const BigFloat &a);

/// Upper bound on the error of rounding a real to `x`'s precision, i.e. half an ulp of x.
double half_ulp(const BigFloat &x);

double round_up(double x);
double add_up(double a, double b);
double mul_up(double a, double b);

struct BoundedReal {
    BigFloat value;
    double abs_error = 0.0;

    BoundedReal() = default;
    BoundedReal(BigFloat v, double err) : value(std::move(v)), abs_error(err) {}

    /// Upper bound on |true value|.
    double magnitude_upper() const { return add_up(value.abs_upper(), abs_error); }
    bool contains(double x) const;
};

/// Exact integer lifted to a ball of radius zero (if representable at `prec`).
BoundedReal exact(long value, Precision prec);

BoundedReal add(const BoundedReal &a, const BoundedReal &b, Precision prec);
BoundedReal sub(const BoundedReal &a, const BoundedReal &b, Precision prec);
BoundedReal mul(const BoundedReal &a, const BoundedReal &b, Precision prec);
BoundedReal mul(const BoundedReal &a, long b, Precision prec);
BoundedReal div(const BoundedReal &a, long b, Precision prec);
BoundedReal neg(const BoundedReal &a);

struct BoundedComplex {
    BoundedReal re;
    BoundedReal im;

    /// Largest componentwise radius.
    double max_error() const;
};

BoundedComplex add(const BoundedComplex &a, const BoundedComplex &b, Precision prec);
BoundedComplex mul(const BoundedComplex &a, const BoundedComplex &b, Precision prec);
BoundedComplex mul(const BoundedComplex &a, const BoundedReal &b, Precision prec);
BoundedComplex conj(const BoundedComplex &a);

} // namespace mfrel
