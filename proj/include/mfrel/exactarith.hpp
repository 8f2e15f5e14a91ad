#pragma once

// Exact integer primitives: half-integers for weights, the Kronecker symbol,
// the unit epsilon_d, Kloosterman sums and the level-one dimension formula.

#include "mfrel/bounded.hpp"

#include <gmpxx.h>

#include <compare>
#include <complex>
#include <string>
#include <string_view>

namespace mfrel {

/// An element of (1/2)Z stored as twice its value.
class HalfInteger {
public:
    constexpr HalfInteger() = default;
    constexpr HalfInteger(long integer) : twice_(2 * integer) {} // NOLINT: integers are half-integers

    static constexpr HalfInteger from_twice(long twice)
    {
        HalfInteger h;
        h.twice_ = twice;
        return h;
    }

    /// Accepts "24", "-3", "15/2" and "7.5".
    static HalfInteger parse(std::string_view text);

    constexpr long twice() const { return twice_; }
    constexpr bool is_integral() const { return twice_ % 2 == 0; }
    /// Throws std::domain_error when not integral.
    long integer() const;
    double to_double() const { return static_cast<double>(twice_) / 2.0; }
    mpq_class to_rational() const { return mpq_class(twice_, 2); }
    std::string to_string() const;

    constexpr auto operator<=>(const HalfInteger &) const = default;

    friend constexpr HalfInteger operator+(HalfInteger a, HalfInteger b) { return from_twice(a.twice_ + b.twice_); }
    friend constexpr HalfInteger operator-(HalfInteger a, HalfInteger b) { return from_twice(a.twice_ - b.twice_); }
    friend constexpr HalfInteger operator-(HalfInteger a) { return from_twice(-a.twice_); }

private:
    long twice_ = 0;
};

using Weight = HalfInteger;

/// Weight k >= 2 in (1/2)Z and level N >= 1; 4 | N when k is half-integral.
class WeightProfile {
public:
    /// Throws std::invalid_argument on an invalid combination.
    WeightProfile(Weight k, long level);

    Weight k() const { return k_; }
    long level() const { return level_; }
    bool half_integral() const { return !k_.is_integral(); }

    bool operator==(const WeightProfile &) const = default;

private:
    Weight k_;
    long level_;
};

/// Kronecker symbol (a/b), the full extension of the Jacobi symbol to all integers b.
int kronecker_symbol(long a, long b);

/// epsilon_d = 1 for d = 1 (mod 4) and i for d = 3 (mod 4). Throws std::invalid_argument for even d.
std::complex<int> epsilon(long d);

/// Exponent e with epsilon_d = i^e.
int epsilon_exponent(long d);

long gcd(long a, long b);
/// Inverse of a modulo c (c >= 1, gcd(a, c) = 1); result in [0, c).
long mod_inverse(long a, long c);
long euler_phi(long n);

struct KloostermanValue {
    BoundedComplex value;
    long modulus = 1;
};

/// K_k(m, n, c). For half-integral k each residue v is twisted by (c/v)^{2k} epsilon_v^{2k};
/// this requires 4 | c. The sum is evaluated directly over v (mod c)^* at `prec` bits.
KloostermanValue kloosterman(Weight k, long m, long n, long c, Precision prec = kDefaultPrecision);

/// dim S_k(SL_2(Z)) for even k >= 4.
long dim_cusp_forms_level1(long k);

} // namespace mfrel
