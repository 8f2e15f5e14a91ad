#include "mfrel/exactarith.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace mfrel {

namespace {

long parse_long(std::string_view s)
{
    long v = 0;
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    }
    return v;
}

long positive_mod(long a, long c)
{
    const long r = a % c;
    return r < 0 ? r + c : r;
}

int bit_length(unsigned long x)
{
    int b = 0;
    while (x != 0) {
        ++b;
        x >>= 1;
    }
    return b;
}

} // namespace

HalfInteger HalfInteger::parse(std::string_view text)
{
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const long num = parse_long(text.substr(0, slash));
        const long den = parse_long(text.substr(slash + 1));
        if (den == 1) {
            return HalfInteger(num);
        }
        if (den == 2) {
            return from_twice(num);
        }
        throw std::invalid_argument("weight must lie in (1/2)Z: '" + std::string(text) + "'");
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        const auto frac = text.substr(dot + 1);
        const bool negative = !text.empty() && text.front() == '-';
        const long whole = dot == 0 || (dot == 1 && negative) ? 0 : parse_long(text.substr(0, dot));
        long half = 0;
        if (frac.find_first_not_of('0') == std::string_view::npos) {
            half = 0;
        } else if (frac.front() == '5' && frac.find_first_not_of('0', 1) == std::string_view::npos) {
            half = 1;
        } else {
            throw std::invalid_argument("weight must lie in (1/2)Z: '" + std::string(text) + "'");
        }
        return from_twice(2 * whole + (negative ? -half : half));
    }
    return HalfInteger(parse_long(text));
}

long HalfInteger::integer() const
{
    if (!is_integral()) {
        throw std::domain_error("half-integer " + to_string() + " is not an integer");
    }
    return twice_ / 2;
}

std::string HalfInteger::to_string() const
{
    if (is_integral()) {
        return std::to_string(twice_ / 2);
    }
    return std::to_string(twice_) + "/2";
}

WeightProfile::WeightProfile(Weight k, long level) : k_(k), level_(level)
{
    if (k < Weight(2)) {
        throw std::invalid_argument("weight must satisfy k >= 2, got " + k.to_string());
    }
    if (level < 1) {
        throw std::invalid_argument("level must be positive, got " + std::to_string(level));
    }
    if (!k.is_integral() && level % 4 != 0) {
        throw std::invalid_argument("half-integral weight " + k.to_string() + " requires 4 | N, got N = " +
                                    std::to_string(level));
    }
}

int kronecker_symbol(long a, long b)
{
    // Cohen, Algorithm 1.4.10.
    if (b == 0) {
        return (a == 1 || a == -1) ? 1 : 0;
    }
    if (a % 2 == 0 && b % 2 == 0) {
        return 0;
    }
    static constexpr int tab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};
    unsigned long ub = b < 0 ? -static_cast<unsigned long>(b) : static_cast<unsigned long>(b);
    int v = 0;
    while (ub % 2 == 0) {
        ++v;
        ub /= 2;
    }
    int k = 1;
    if (v % 2 == 1) {
        k = tab2[static_cast<unsigned long>(a) & 7];
    }
    if (b < 0 && a < 0) {
        k = -k;
    }
    // Now b = ub is odd and positive.
    long ua = positive_mod(a, static_cast<long>(ub));
    unsigned long x = static_cast<unsigned long>(ua);
    unsigned long y = ub;
    while (x != 0) {
        int w = 0;
        while (x % 2 == 0) {
            ++w;
            x /= 2;
        }
        if (w % 2 == 1) {
            k *= tab2[y & 7];
        }
        if ((x & y & 2) != 0) {
            k = -k;
        }
        const unsigned long r = y % x;
        y = x;
        x = r;
    }
    return y == 1 ? k : 0;
}

int epsilon_exponent(long d)
{
    if (d % 2 == 0) {
        throw std::invalid_argument("epsilon_d needs odd d, got " + std::to_string(d));
    }
    return positive_mod(d, 4) == 1 ? 0 : 1;
}

std::complex<int> epsilon(long d) { return epsilon_exponent(d) == 0 ? std::complex<int>(1, 0) : std::complex<int>(0, 1); }

long gcd(long a, long b)
{
    a = std::labs(a);
    b = std::labs(b);
    while (b != 0) {
        const long r = a % b;
        a = b;
        b = r;
    }
    return a;
}

long mod_inverse(long a, long c)
{
    if (c == 1) {
        return 0;
    }
    long old_r = positive_mod(a, c), r = c;
    long old_s = 1, s = 0;
    while (r != 0) {
        const long q = old_r / r;
        old_r -= q * r;
        std::swap(old_r, r);
        old_s -= q * s;
        std::swap(old_s, s);
    }
    if (old_r != 1) {
        throw std::invalid_argument("no inverse of " + std::to_string(a) + " modulo " + std::to_string(c));
    }
    return positive_mod(old_s, c);
}

long euler_phi(long n)
{
    long result = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) {
                n /= p;
            }
            result -= result / p;
        }
    }
    if (n > 1) {
        result -= result / n;
    }
    return result;
}

KloostermanValue kloosterman(Weight k, long m, long n, long c, Precision prec)
{
    if (c <= 0) {
        throw std::invalid_argument("Kloosterman modulus must be positive, got " + std::to_string(c));
    }
    const bool half = !k.is_integral();
    if (half && c % 4 != 0) {
        throw std::invalid_argument("half-integral Kloosterman sum needs 4 | c, got c = " + std::to_string(c));
    }

    // Gaussian-integer weight attached to each exponent r = m*vbar + n*v (mod c).
    std::vector<std::int64_t> count_re(static_cast<std::size_t>(c), 0);
    std::vector<std::int64_t> count_im(static_cast<std::size_t>(c), 0);
    const long mr = positive_mod(m, c);
    const long nr = positive_mod(n, c);
    const long twice_k = k.twice();
    long terms = 0;
    for (long v = 0; v < c; ++v) {
        if (gcd(v, c) != 1) {
            continue;
        }
        ++terms;
        const long vbar = mod_inverse(v, c);
        const auto r = static_cast<std::size_t>((mr * vbar + nr * v) % c);
        if (!half) {
            ++count_re[r];
            continue;
        }
        // (c/v)^{2k} epsilon_v^{2k} with 2k odd equals i^t.
        long t = epsilon_exponent(v) * twice_k;
        if (kronecker_symbol(c, v) < 0) {
            t += 2;
        }
        switch (positive_mod(t, 4)) {
        case 0: ++count_re[r]; break;
        case 1: ++count_im[r]; break;
        case 2: --count_re[r]; break;
        default: --count_im[r]; break;
        }
    }

    const int cbits = bit_length(static_cast<unsigned long>(c));
    const Precision wp = prec + 2 * cbits + 8;

    mpfr_t zeta_re, zeta_im, z_re, z_im, t1, t2, t3, acc_re, acc_im;
    for (auto *x : {&zeta_re, &zeta_im, &z_re, &z_im, &t1, &t2, &t3, &acc_re, &acc_im}) {
        mpfr_init2(*x, wp);
    }
    mpfr_const_pi(t1, MPFR_RNDN);
    mpfr_mul_2ui(t1, t1, 1, MPFR_RNDN);
    mpfr_div_si(t1, t1, c, MPFR_RNDN);
    mpfr_sin_cos(zeta_im, zeta_re, t1, MPFR_RNDN);
    mpfr_set_ui(z_re, 1, MPFR_RNDN);
    mpfr_set_ui(z_im, 0, MPFR_RNDN);
    mpfr_set_ui(acc_re, 0, MPFR_RNDN);
    mpfr_set_ui(acc_im, 0, MPFR_RNDN);

    // For integral weight count_re[r] = count_re[c - r] and the sum is real, so
    // r runs over [0, c/2] only and interior classes are doubled.
    const long last = half ? c - 1 : c / 2;
    for (long r = 0; r <= last; ++r) {
        auto a = count_re[static_cast<std::size_t>(r)];
        const auto b = count_im[static_cast<std::size_t>(r)];
        if (!half && r != 0 && 2 * r != c) {
            a *= 2;
        }
        if (a != 0) {
            mpfr_mul_si(t1, z_re, a, MPFR_RNDN);
            mpfr_add(acc_re, acc_re, t1, MPFR_RNDN);
            if (half) {
                mpfr_mul_si(t1, z_im, a, MPFR_RNDN);
                mpfr_add(acc_im, acc_im, t1, MPFR_RNDN);
            }
        }
        if (b != 0) {
            mpfr_mul_si(t1, z_im, b, MPFR_RNDN);
            mpfr_sub(acc_re, acc_re, t1, MPFR_RNDN);
            mpfr_mul_si(t1, z_re, b, MPFR_RNDN);
            mpfr_add(acc_im, acc_im, t1, MPFR_RNDN);
        }
        if (r < last) {
            // z <- z * zeta
            mpfr_mul(t1, z_re, zeta_re, MPFR_RNDN);
            mpfr_mul(t2, z_im, zeta_im, MPFR_RNDN);
            mpfr_mul(t3, z_re, zeta_im, MPFR_RNDN);
            mpfr_sub(t1, t1, t2, MPFR_RNDN);
            mpfr_mul(t2, z_im, zeta_re, MPFR_RNDN);
            mpfr_add(z_im, t3, t2, MPFR_RNDN);
            mpfr_set(z_re, t1, MPFR_RNDN);
        }
    }

    // Each power zeta^r carries at most 23 r ulps of drift; accumulation adds at most 5 c phi(c) more.
    const double working_err =
        std::ldexp(32.0 * static_cast<double>(c) * static_cast<double>(terms), -static_cast<int>(wp));

    KloostermanValue out;
    out.modulus = c;
    out.value.re.value = BigFloat(prec);
    out.value.im.value = BigFloat(prec);
    mpfr_set(out.value.re.value.get(), acc_re, MPFR_RNDN);
    mpfr_set(out.value.im.value.get(), acc_im, MPFR_RNDN);
    out.value.re.abs_error = add_up(working_err, half_ulp(out.value.re.value));
    out.value.im.abs_error = add_up(working_err, half_ulp(out.value.im.value));
    if (!half) {
        out.value.im.abs_error = 0.0;
    }

    for (auto *x : {&zeta_re, &zeta_im, &z_re, &z_im, &t1, &t2, &t3, &acc_re, &acc_im}) {
        mpfr_clear(*x);
    }
    return out;
}

long dim_cusp_forms_level1(long k)
{
    if (k < 4 || k % 2 != 0) {
        throw std::invalid_argument("dim S_k(1) needs even k >= 4, got " + std::to_string(k));
    }
    return k % 12 == 2 ? k / 12 - 1 : k / 12;
}

} // namespace mfrel
