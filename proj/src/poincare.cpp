#include "mfrel/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>
#include <vector>

#include "mfrel/special.hpp"

namespace mfrel {

namespace {

constexpr long kChunk = 16; // moduli per partial sum; fixes the reduction tree

enum class Kernel { bessel_j, bessel_i, power };

struct SumSpec {
    Weight kloosterman_weight;
    long km = 0;
    long kn = 0;
    Kernel kernel = Kernel::bessel_j;
    HalfInteger nu;   // Bessel order k - 1
    Weight k;         // exponent of c for Kernel::power
    long level = 1;
    long abs_mn = 0;  // Bessel argument 4 pi sqrt(|mn|) / c
};

BoundedReal pi_ball(Precision prec)
{
    BigFloat p = BigFloat::pi(prec);
    const double err = half_ulp(p);
    return {std::move(p), err};
}

/// A value correctly rounded up to `units` half-ulps of relative error.
BoundedReal with_relative_error(BigFloat v, double units)
{
    const double err = std::ldexp(mul_up(v.abs_upper(), units), -static_cast<int>(v.precision()));
    return {std::move(v), round_up(err)};
}

/// e^{i pi t / 4}
BoundedComplex eighth_root_of_unity(long t, Precision prec)
{
    t = ((t % 8) + 8) % 8;
    BoundedComplex z{exact(0, prec), exact(0, prec)};
    if (t % 2 == 0) {
        static constexpr int re[4] = {1, 0, -1, 0};
        static constexpr int im[4] = {0, 1, 0, -1};
        z.re = exact(re[t / 2], prec);
        z.im = exact(im[t / 2], prec);
        return z;
    }
    BigFloat h(prec);
    mpfr_sqrt_ui(h.get(), 2, MPFR_RNDN);
    mpfr_div_2ui(h.get(), h.get(), 1, MPFR_RNDN);
    const double err = half_ulp(h);
    const int sre = (t == 1 || t == 7) ? 1 : -1;
    const int sim = (t == 1 || t == 3) ? 1 : -1;
    z.re = {sre > 0 ? h : -h, err};
    z.im = {sim > 0 ? h : -h, err};
    return z;
}

/// i^k = e^{i pi (2k) / 4}
BoundedComplex i_power(Weight k, Precision prec) { return eighth_root_of_unity(k.twice(), prec); }

/// (a/b)^{(k-1)/2} for positive integers a, b.
BoundedReal ratio_power(long a, long b, Weight k, Precision prec)
{
    BigFloat q(prec), e(prec), r(prec);
    mpfr_set_si(q.get(), a, MPFR_RNDN);
    mpfr_div_si(q.get(), q.get(), b, MPFR_RNDN);
    mpfr_set_si(e.get(), k.twice() - 2, MPFR_RNDN);
    mpfr_div_2ui(e.get(), e.get(), 2, MPFR_RNDN);
    mpfr_pow(r.get(), q.get(), e.get(), MPFR_RNDN);
    return with_relative_error(std::move(r), 1.01 * (std::fabs((k.to_double() - 1.0) / 2.0) + 2.0));
}

/// Gamma(x) for x in (1/2)Z, x > 0.
BoundedReal gamma_ball(HalfInteger x, Precision prec)
{
    BigFloat arg(prec), g(prec);
    mpfr_set_si(arg.get(), x.twice(), MPFR_RNDN);
    mpfr_div_2ui(arg.get(), arg.get(), 1, MPFR_RNDN);
    mpfr_gamma(g.get(), arg.get(), MPFR_RNDN);
    const double err = half_ulp(g);
    return {std::move(g), err};
}

BoundedReal inverse_ball(const BoundedReal &x, Precision prec)
{
    // 1/(v +- e) lies within 1/v +- e / (|v| (|v| - e)) when e < |v|.
    const double vlow = mpfr_get_d(abs(x.value).get(), MPFR_RNDD);
    if (!(x.abs_error < vlow)) {
        throw UnreachableTolerance("reciprocal of a ball containing zero");
    }
    BigFloat r(prec);
    mpfr_ui_div(r.get(), 1, x.value.get(), MPFR_RNDN);
    const double err = add_up(round_up(x.abs_error / (vlow * (vlow - x.abs_error)) * (1.0 + 1e-12)), half_ulp(r));
    return {std::move(r), err};
}

BoundedComplex modulus_term(const SumSpec &spec, long c, const BoundedReal &argument_numerator, Precision prec)
{
    const KloostermanValue kl = kloosterman(spec.kloosterman_weight, spec.km, spec.kn, c, prec);
    if (spec.kernel == Kernel::power) {
        BigFloat ck(prec), e(prec);
        mpfr_set_si(e.get(), spec.k.twice(), MPFR_RNDN);
        mpfr_div_2ui(e.get(), e.get(), 1, MPFR_RNDN);
        mpfr_ui_pow(ck.get(), static_cast<unsigned long>(c), e.get(), MPFR_RNDN);
        BoundedReal inv = inverse_ball({ck, half_ulp(ck)}, prec);
        return mul(kl.value, inv, prec);
    }
    const BoundedReal x = div(argument_numerator, c, prec);
    const BoundedReal kernel =
        spec.kernel == Kernel::bessel_j ? bessel_j(spec.nu, x, prec) : bessel_i(spec.nu, x, prec);
    BoundedComplex t = mul(kl.value, kernel, prec);
    return {div(t.re, c, prec), div(t.im, c, prec)};
}

/// Sum over c = N, 2N, ..., cutoff. `half_sum` receives the partial sum through about cutoff/2.
BoundedComplex c_sum(const SumSpec &spec, long cutoff, const SumOptions &opts, BoundedComplex *half_sum)
{
    const Precision prec = opts.precision;
    const Precision wp = prec + 32;
    const long count = cutoff / spec.level;
    const long chunks = (count + kChunk - 1) / kChunk;

    BoundedReal numerator;
    if (spec.kernel != Kernel::power) {
        BigFloat s(prec);
        mpfr_sqrt_ui(s.get(), static_cast<unsigned long>(spec.abs_mn), MPFR_RNDN);
        BoundedReal sq{std::move(s), 0.0};
        sq.abs_error = half_ulp(sq.value);
        numerator = mul(mul(pi_ball(prec), 4, prec), sq, prec);
    }

    std::vector<BoundedComplex> partial(static_cast<std::size_t>(chunks));
    auto work = [&](long first_chunk, long stride) {
        for (long ch = first_chunk; ch < chunks; ch += stride) {
            BoundedComplex acc{exact(0, wp), exact(0, wp)};
            const long lo = ch * kChunk + 1;
            const long hi = std::min(count, (ch + 1) * kChunk);
            for (long j = lo; j <= hi; ++j) {
                acc = add(acc, modulus_term(spec, j * spec.level, numerator, prec), wp);
            }
            partial[static_cast<std::size_t>(ch)] = std::move(acc);
        }
    };
    const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(std::max<long>(chunks, 1))));
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back(work, t, threads);
        }
        for (auto &th : pool) {
            th.join();
        }
    }

    BoundedComplex total{exact(0, wp), exact(0, wp)};
    const long half_chunks = chunks / 2;
    for (long ch = 0; ch < chunks; ++ch) {
        if (half_sum != nullptr && ch == half_chunks) {
            *half_sum = total;
        }
        total = add(total, partial[static_cast<std::size_t>(ch)], wp);
    }
    if (half_sum != nullptr && half_chunks >= chunks) {
        *half_sum = total;
    }
    return total;
}

long choose_cutoff(CoeffFamily family, const WeightProfile &w, long m, long n, double target, long max_cutoff)
{
    const long N = w.level();
    for (long C = N; C <= max_cutoff; C += N) {
        if (tail_bound(family, w, m, n, C) <= target / 2.0) {
            return C;
        }
    }
    std::ostringstream os;
    os << "tail bound for " << family_name(family) << " (m=" << m << ", n=" << n << ", k=" << w.k().to_string()
       << ", N=" << N << ") exceeds " << target / 2.0 << " at the maximal cutoff " << max_cutoff
       << " (bound there: " << tail_bound(family, w, m, n, max_cutoff - max_cutoff % N) << ")";
    throw UnreachableTolerance(os.str());
}

constexpr long kHeuristicCutoff = 2048;

CoeffResult finish(CoeffResult r, const SumSpec &spec, const BoundedComplex &prefactor, bool add_delta,
                   double target, const SumOptions &opts)
{
    const Precision prec = opts.precision;
    const WeightProfile &w = r.weight;
    BoundedComplex sum;
    if (w.k() > Weight(2)) {
        r.cutoff = choose_cutoff(r.family, w, r.m, r.n, target, opts.max_cutoff);
        r.tail_bound = tail_bound(r.family, w, r.m, r.n, r.cutoff);
        sum = c_sum(spec, r.cutoff, opts, nullptr);
    } else {
        // Conditionally convergent: compare the sums through C/2 and C.
        const long C = std::max(w.level(), std::min(opts.max_cutoff, kHeuristicCutoff));
        r.cutoff = C - C % w.level();
        r.heuristic = true;
        BoundedComplex half{exact(0, prec), exact(0, prec)};
        sum = c_sum(spec, r.cutoff, opts, &half);
        BoundedComplex scaled_diff = mul(
            BoundedComplex{sub(sum.re, half.re, prec), sub(sum.im, half.im, prec)}, prefactor, prec);
        r.tail_bound = mul_up(2.0, std::max(scaled_diff.re.magnitude_upper(), scaled_diff.im.magnitude_upper()));
    }

    BoundedComplex value = mul(sum, prefactor, prec);
    if (add_delta) {
        value.re = add(value.re, exact(1, prec), prec);
    }
    r.value = std::move(value);
    r.rounding_bound = r.value.max_error();
    if (!(r.total_bound() <= target)) {
        std::ostringstream os;
        os << family_name(r.family) << " (m=" << r.m << ", n=" << r.n << ", k=" << w.k().to_string()
           << ", N=" << w.level() << "): error bound " << r.total_bound() << " (tail " << r.tail_bound
           << ", rounding " << r.rounding_bound << (r.heuristic ? ", heuristic" : "") << ") exceeds target "
           << target << " at " << prec << " bits";
        throw UnreachableTolerance(os.str());
    }
    return r;
}

void check_target(double target)
{
    if (!(target > 0.0)) {
        throw std::invalid_argument("target error must be positive");
    }
}

} // namespace

std::string family_name(CoeffFamily family)
{
    switch (family) {
    case CoeffFamily::classical: return "P";
    case CoeffFamily::maass_positive: return "Qplus";
    case CoeffFamily::maass_zero: return "Qzero";
    case CoeffFamily::maass_negative: return "Qminus";
    }
    return "?";
}

double tail_bound(CoeffFamily family, const WeightProfile &w, long m, long n, long cutoff)
{
    const double k = w.k().to_double();
    if (k <= 2.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double N = static_cast<double>(w.level());
    const double C = std::max(static_cast<double>(cutoff), N);
    const double nu = k - 1.0;
    const double md = static_cast<double>(m);
    const double nd = std::fabs(static_cast<double>(n));
    const double two_pi = 2.0 * M_PI;
    // sum_{c > C, N | c} c^{1-k} <= N^{1-k} (C/N)^{2-k} / (k-2)
    const double log_c_sum = (1.0 - k) * std::log(N) + (2.0 - k) * std::log(C / N) - std::log(k - 2.0);

    double log_bound = 0.0;
    if (family == CoeffFamily::maass_zero) {
        log_bound = k * std::log(two_pi) + nu * std::log(md) - std::lgamma(k) + log_c_sum;
    } else {
        const double A = two_pi * std::sqrt(md * nd); // x/2 at c = 1
        log_bound = std::log(two_pi) + nu * std::log(A) - std::lgamma(k) + log_c_sum;
        switch (family) {
        case CoeffFamily::classical: log_bound += (nu / 2.0) * std::log(nd / md); break;
        case CoeffFamily::maass_negative:
            log_bound += (nu / 2.0) * std::log(md / nd) - std::lgamma(k - 1.0);
            break;
        case CoeffFamily::maass_positive:
            log_bound += (nu / 2.0) * std::log(md / nd) + (A / C) * (A / C) / (nu + 1.0);
            break;
        default: break;
        }
    }
    return round_up(std::exp(log_bound) * (1.0 + 1e-9));
}

CoeffResult classical_coeff(const WeightProfile &w, long m, long n, double target_error, const SumOptions &opts)
{
    check_target(target_error);
    if (m < 1 || n < 1) {
        throw std::invalid_argument("classical coefficients need m, n >= 1");
    }
    const Precision prec = opts.precision;
    SumSpec spec{w.k(), m, n, Kernel::bessel_j, w.k() - Weight(1), w.k(), w.level(), m * n};
    // 2 pi i^{-k} (n/m)^{(k-1)/2}
    BoundedReal mag = mul(mul(pi_ball(prec), 2, prec), ratio_power(n, m, w.k(), prec), prec);
    BoundedComplex prefactor = mul(i_power(-w.k(), prec), mag, prec);
    CoeffResult r;
    r.family = CoeffFamily::classical;
    r.weight = w;
    r.m = m;
    r.n = n;
    return finish(std::move(r), spec, prefactor, m == n, target_error, opts);
}

CoeffResult maass_coeff_positive(const WeightProfile &w, long m, long n, double target_error,
                                 const SumOptions &opts)
{
    check_target(target_error);
    if (m < 1 || n < 1) {
        throw std::invalid_argument("maass_coeff_positive needs m, n >= 1");
    }
    const Precision prec = opts.precision;
    SumSpec spec{Weight(2) - w.k(), -m, n, Kernel::bessel_i, w.k() - Weight(1), w.k(), w.level(), m * n};
    // -2 pi i^k (m/n)^{(k-1)/2}
    BoundedReal mag = mul(mul(pi_ball(prec), -2, prec), ratio_power(m, n, w.k(), prec), prec);
    BoundedComplex prefactor = mul(i_power(w.k(), prec), mag, prec);
    CoeffResult r;
    r.family = CoeffFamily::maass_positive;
    r.weight = w;
    r.m = m;
    r.n = n;
    return finish(std::move(r), spec, prefactor, false, target_error, opts);
}

CoeffResult maass_coeff_zero(const WeightProfile &w, long m, double target_error, const SumOptions &opts)
{
    check_target(target_error);
    if (m < 1) {
        throw std::invalid_argument("maass_coeff_zero needs m >= 1");
    }
    const Precision prec = opts.precision;
    SumSpec spec{Weight(2) - w.k(), -m, 0, Kernel::power, w.k() - Weight(1), w.k(), w.level(), 0};
    // -(2 pi i)^k m^{k-1} / (k-1)!
    const double k = w.k().to_double();
    BigFloat two_pi_k(prec), e(prec), m_pow(prec);
    mpfr_set_si(e.get(), w.k().twice(), MPFR_RNDN);
    mpfr_div_2ui(e.get(), e.get(), 1, MPFR_RNDN);
    mpfr_const_pi(two_pi_k.get(), MPFR_RNDN);
    mpfr_mul_2ui(two_pi_k.get(), two_pi_k.get(), 1, MPFR_RNDN);
    mpfr_pow(two_pi_k.get(), two_pi_k.get(), e.get(), MPFR_RNDN);
    mpfr_sub_ui(e.get(), e.get(), 1, MPFR_RNDN);
    mpfr_ui_pow(m_pow.get(), static_cast<unsigned long>(m), e.get(), MPFR_RNDN);
    BoundedReal mag = mul(with_relative_error(std::move(two_pi_k), 1.01 * (k + 3.0)),
                          with_relative_error(std::move(m_pow), 1.0), prec);
    mag = mul(mag, inverse_ball(gamma_ball(w.k(), prec), prec), prec);
    BoundedComplex prefactor = mul(i_power(w.k(), prec), neg(mag), prec);
    CoeffResult r;
    r.family = CoeffFamily::maass_zero;
    r.weight = w;
    r.m = m;
    r.n = 0;
    return finish(std::move(r), spec, prefactor, false, target_error, opts);
}

CoeffResult maass_coeff_negative(const WeightProfile &w, long m, long n, double target_error,
                                 const SumOptions &opts)
{
    check_target(target_error);
    if (m < 1 || n > -1) {
        throw std::invalid_argument("maass_coeff_negative needs m >= 1 and n <= -1");
    }
    const Precision prec = opts.precision;
    SumSpec spec{Weight(2) - w.k(), -m, n, Kernel::bessel_j, w.k() - Weight(1), w.k(), w.level(), m * (-n)};
    // -2 pi i^k / (k-2)! |m/n|^{(k-1)/2}
    BoundedReal mag = mul(mul(pi_ball(prec), -2, prec), ratio_power(m, -n, w.k(), prec), prec);
    mag = mul(mag, inverse_ball(gamma_ball(w.k() - Weight(1), prec), prec), prec);
    BoundedComplex prefactor = mul(i_power(w.k(), prec), mag, prec);
    CoeffResult r;
    r.family = CoeffFamily::maass_negative;
    r.weight = w;
    r.m = m;
    r.n = n;
    return finish(std::move(r), spec, prefactor, false, target_error, opts);
}

} // namespace mfrel
