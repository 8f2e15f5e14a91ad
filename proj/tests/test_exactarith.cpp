#include "mfrel/exactarith.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

using namespace mfrel;

namespace {

using cld = std::complex<long double>;

// (a/p) for an odd prime p by Euler's criterion.
int legendre_euler(long a, long p)
{
    long r = ((a % p) + p) % p;
    if (r == 0) {
        return 0;
    }
    long result = 1, base = r, e = (p - 1) / 2;
    while (e > 0) {
        if (e & 1) {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    return result == 1 ? 1 : -1;
}

// Kronecker symbol from the factorization of b.
int kronecker_by_factoring(long a, long b)
{
    if (b == 0) {
        return (a == 1 || a == -1) ? 1 : 0;
    }
    int result = 1;
    if (b < 0) {
        b = -b;
        if (a < 0) {
            result = -result;
        }
    }
    while (b % 2 == 0) {
        b /= 2;
        if (a % 2 == 0) {
            return 0;
        }
        const long r = ((a % 8) + 8) % 8;
        if (r == 3 || r == 5) {
            result = -result;
        }
    }
    for (long p = 3; b > 1; p += 2) {
        while (b % p == 0) {
            b /= p;
            result *= legendre_euler(a, p);
        }
    }
    return result;
}

cld direct_kloosterman(Weight k, long m, long n, long c)
{
    const long double pi = std::acos(-1.0L);
    cld sum = 0;
    for (long v = 0; v < c; ++v) {
        long g = v, h = c;
        while (h != 0) {
            const long t = g % h;
            g = h;
            h = t;
        }
        if (g != 1) {
            continue;
        }
        long vbar = 0;
        for (long u = 0; u < c; ++u) {
            if ((u * v) % c == 1 % c) {
                vbar = u;
                break;
            }
        }
        const long double phase = 2 * pi * static_cast<long double>((m * vbar + n * v) % c) / c;
        cld term = std::polar(1.0L, phase);
        if (!k.is_integral()) {
            const cld eps = (v % 4 == 1) ? cld(1, 0) : cld(0, 1);
            term *= static_cast<long double>(kronecker_by_factoring(c, v)) * std::pow(eps, static_cast<int>(k.twice()));
        }
        sum += term;
    }
    return sum;
}

cld as_complex(const KloostermanValue &kv)
{
    return {static_cast<long double>(kv.value.re.value.to_double()),
            static_cast<long double>(kv.value.im.value.to_double())};
}

int mobius(long n)
{
    int mu = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) {
                return 0;
            }
            mu = -mu;
        }
    }
    return n > 1 ? -mu : mu;
}

} // namespace

TEST_CASE("half integers parse in all three spellings")
{
    CHECK(HalfInteger::parse("24") == Weight(24));
    CHECK(HalfInteger::parse("15/2") == HalfInteger::from_twice(15));
    CHECK(HalfInteger::parse("7.5") == HalfInteger::from_twice(15));
    CHECK(HalfInteger::parse("-3/2").twice() == -3);
    CHECK(HalfInteger::parse("15/2").to_string() == "15/2");
    CHECK_THROWS_AS(HalfInteger::parse("7/3"), std::invalid_argument);
    CHECK_THROWS_AS(HalfInteger::parse("7.25"), std::invalid_argument);
    CHECK_THROWS_AS(HalfInteger::parse("x"), std::invalid_argument);
}

TEST_CASE("weight profiles enforce k >= 2 and 4 | N for half-integral k")
{
    CHECK_NOTHROW(WeightProfile(Weight(12), 1));
    CHECK(WeightProfile(HalfInteger::from_twice(15), 4).half_integral());
    CHECK_THROWS_AS(WeightProfile(HalfInteger::from_twice(15), 2), std::invalid_argument);
    CHECK_THROWS_AS(WeightProfile(HalfInteger::from_twice(3), 4), std::invalid_argument);
    CHECK_THROWS_AS(WeightProfile(Weight(12), 0), std::invalid_argument);
}

TEST_CASE("kronecker symbol agrees with factorization and Euler's criterion")
{
    CHECK(kronecker_symbol(1, 1) == 1);
    CHECK(kronecker_symbol(2, 3) == -1);
    CHECK(kronecker_symbol(6, 9) == 0);
    for (long a = -60; a <= 60; ++a) {
        for (long b = -60; b <= 60; ++b) {
            CAPTURE(a);
            CAPTURE(b);
            REQUIRE(kronecker_symbol(a, b) == kronecker_by_factoring(a, b));
        }
    }
}

TEST_CASE("kronecker symbol is multiplicative in the top argument")
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> dist(-500, 500);
    for (int i = 0; i < 500; ++i) {
        const long a = dist(rng), a2 = dist(rng), b = dist(rng);
        CHECK(kronecker_symbol(a * a2, b) == kronecker_symbol(a, b) * kronecker_symbol(a2, b));
    }
}

TEST_CASE("epsilon follows d mod 4")
{
    CHECK(epsilon(1) == std::complex<int>(1, 0));
    CHECK(epsilon(3) == std::complex<int>(0, 1));
    CHECK(epsilon(-5) == std::complex<int>(0, 1));
    CHECK(epsilon(-3) == std::complex<int>(1, 0));
    CHECK_THROWS_AS(epsilon(4), std::invalid_argument);
}

TEST_CASE("small Kloosterman sums")
{
    const auto k1 = kloosterman(Weight(12), 1, 1, 1, 128);
    CHECK(k1.value.re.contains(1.0));
    CHECK(k1.value.im.contains(0.0));
    const auto k3 = kloosterman(Weight(12), 1, 1, 3, 128);
    CHECK(k3.value.re.contains(-1.0));
    CHECK(k3.value.im.value.is_zero());
    CHECK_THROWS_AS(kloosterman(Weight(12), 1, 1, 0, 128), std::invalid_argument);
    CHECK_THROWS_AS(kloosterman(HalfInteger::from_twice(15), 1, 1, 6, 128), std::invalid_argument);
}

TEST_CASE("Kloosterman sums agree with direct long double summation")
{
    std::mt19937 rng(11);
    std::uniform_int_distribution<long> mn(-30, 30);
    std::uniform_int_distribution<long> cd(1, 90);
    for (int i = 0; i < 200; ++i) {
        const bool half = i % 2 == 1;
        const Weight k = half ? HalfInteger::from_twice(2 * static_cast<long>(i % 7) + 5) : Weight(i % 9 + 2);
        const long c = half ? 4 * ((cd(rng) + 3) / 4) : cd(rng);
        const long m = mn(rng), n = mn(rng);
        const auto got = kloosterman(k, m, n, c, 128);
        const cld want = direct_kloosterman(k, m, n, c);
        CAPTURE(k.to_string());
        CAPTURE(m);
        CAPTURE(n);
        CAPTURE(c);
        CHECK(std::abs(as_complex(got) - want) < 1e-12L * c);
        CHECK(got.value.re.abs_error < 1e-25);
    }
}

TEST_CASE("Kloosterman sums: symmetry, k-independence, conjugation and the trivial bound")
{
    std::mt19937 rng(3);
    std::uniform_int_distribution<long> mn(-50, 50);
    std::uniform_int_distribution<long> cd(1, 150);
    for (int i = 0; i < 100; ++i) {
        const long c = cd(rng), m = mn(rng), n = mn(rng);
        const auto a = kloosterman(Weight(4), m, n, c, 128);
        const auto b = kloosterman(Weight(4), n, m, c, 128);
        CHECK(std::abs(as_complex(a) - as_complex(b)) < 1e-25);
        for (long k : {2, 7}) {
            CHECK(std::abs(as_complex(kloosterman(Weight(k), m, n, c, 128)) - as_complex(a)) < 1e-25);
        }
        const auto conj_side = kloosterman(Weight(2) - Weight(4), -m, -n, c, 128);
        CHECK(std::abs(std::conj(as_complex(conj_side)) - as_complex(a)) < 1e-25);
        CHECK(std::abs(as_complex(a)) <= euler_phi(c) * (1 + 1e-12));

        const long c4 = 4 * ((c + 3) / 4);
        const Weight kh = HalfInteger::from_twice(2 * (i % 6) + 5);
        const auto h = kloosterman(kh, m, n, c4, 128);
        const auto hc = kloosterman(Weight(2) - kh, -m, -n, c4, 128);
        CHECK(std::abs(std::conj(as_complex(hc)) - as_complex(h)) < 1e-25);
        CHECK(std::abs(as_complex(h)) <= euler_phi(c4) * (1 + 1e-12));
    }
}

TEST_CASE("K(-m, 0, c) is the Ramanujan sum for integral weight")
{
    for (long c = 1; c <= 60; ++c) {
        for (long m = 1; m <= 12; ++m) {
            long ramanujan = 0;
            for (long d = 1; d <= c; ++d) {
                if (c % d == 0 && m % d == 0) {
                    ramanujan += mobius(c / d) * d;
                }
            }
            const auto kv = kloosterman(Weight(-10), -m, 0, c, 128);
            CHECK(kv.value.re.contains(static_cast<double>(ramanujan)));
        }
    }
}

TEST_CASE("dim S_k(1) matches the count of monomials E4^a E6^b")
{
    for (long k = 4; k <= 80; k += 2) {
        long monomials = 0;
        for (long a = 0; 4 * a <= k; ++a) {
            if ((k - 4 * a) % 6 == 0) {
                ++monomials;
            }
        }
        CAPTURE(k);
        CHECK(dim_cusp_forms_level1(k) == monomials - 1);
    }
    CHECK(dim_cusp_forms_level1(24) == 2);
    CHECK(dim_cusp_forms_level1(12) == 1);
    CHECK(dim_cusp_forms_level1(4) == 0);
    CHECK_THROWS_AS(dim_cusp_forms_level1(7), std::invalid_argument);
    CHECK_THROWS_AS(dim_cusp_forms_level1(2), std::invalid_argument);
}

TEST_CASE("modular inverse, gcd and phi")
{
    for (long c = 1; c <= 50; ++c) {
        long phi = 0;
        for (long v = 0; v < c; ++v) {
            if (gcd(v, c) == 1) {
                ++phi;
                CHECK((mod_inverse(v, c) * v) % c == 1 % c);
            }
        }
        CHECK(euler_phi(c) == phi);
    }
    CHECK_THROWS_AS(mod_inverse(4, 8), std::invalid_argument);
}
