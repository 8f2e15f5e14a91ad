#include "mfrel/poincare.hpp"
#include "mfrel/qseries.hpp"

#include <doctest.h>

#include <cmath>

using namespace mfrel;

namespace {

double mid(const BoundedReal &b) { return b.value.to_double(); }

// |true - want| <= bound for an exactly known rational value.
bool agrees(const CoeffResult &r, const mpq_class &want, double slack = 0.0)
{
    BigFloat d(want, 192);
    mpfr_sub(d.get(), d.get(), r.value.re.value.get(), MPFR_RNDN);
    return d.abs_upper() <= r.total_bound() + slack;
}

const WeightProfile w12{Weight(12), 1};
const WeightProfile w24{Weight(24), 1};

} // namespace

TEST_CASE("P(1,12,1) is a multiple of Delta")
{
    const auto a1 = classical_coeff(w12, 1, 1, 1e-12);
    const auto a2 = classical_coeff(w12, 1, 2, 1e-12);
    const auto a3 = classical_coeff(w12, 1, 3, 1e-12);
    const double r2 = mid(a2.value.re) / mid(a1.value.re);
    const double r3 = mid(a3.value.re) / mid(a1.value.re);
    CHECK(r2 == doctest::Approx(-24).epsilon(1e-10));
    CHECK(r3 == doctest::Approx(252).epsilon(1e-10));
}

TEST_CASE("integral-weight coefficients are real")
{
    for (long n = 1; n <= 4; ++n) {
        const auto a = classical_coeff(w24, 2, n, 1e-10);
        CHECK(std::fabs(mid(a.value.im)) <= a.rounding_bound);
        const auto b = maass_coeff_positive(w12, 1, n, 1e-6);
        CHECK(std::fabs(mid(b.value.im)) <= b.rounding_bound);
    }
}

TEST_CASE("coefficients stay inside the trivial-bound envelope")
{
    const double pi = std::acos(-1.0);
    for (long m = 1; m <= 3; ++m) {
        for (long n = 1; n <= 3; ++n) {
            const double k = 24;
            double envelope = 0;
            for (long c = 1; c <= 4000; ++c) {
                envelope += c * std::pow(2 * pi * std::sqrt(double(m * n)) / c, k - 1) / c;
            }
            envelope *= 2 * pi * std::pow(double(n) / m, (k - 1) / 2) / std::tgamma(k);
            const auto a = classical_coeff(w24, m, n, 1e-10);
            const double delta = m == n ? 1.0 : 0.0;
            CHECK(std::fabs(mid(a.value.re) - delta) <= envelope * (1 + 1e-9) + a.total_bound());
        }
    }
}

TEST_CASE("the tail bound is sound and nonincreasing")
{
    for (auto family : {CoeffFamily::classical, CoeffFamily::maass_positive, CoeffFamily::maass_zero,
                        CoeffFamily::maass_negative}) {
        const long n = family == CoeffFamily::maass_negative ? -2 : (family == CoeffFamily::maass_zero ? 0 : 2);
        double prev = INFINITY;
        for (long C = 1; C <= 200; C += 7) {
            const double t = tail_bound(family, w12, 1, n, C);
            CHECK(t <= prev);
            prev = t;
        }
    }
    CHECK(std::isinf(tail_bound(CoeffFamily::classical, WeightProfile(Weight(2), 1), 1, 1, 100)));

    // Refining the cutoff moves the value by less than the coarse run's bound.
    const auto coarse = classical_coeff(w12, 1, 2, 1e-4);
    const auto fine = classical_coeff(w12, 1, 2, 1e-14);
    CHECK(fine.cutoff >= coarse.cutoff);
    CHECK(std::fabs(mid(fine.value.re) - mid(coarse.value.re)) <= coarse.total_bound() + fine.total_bound());

    const auto qc = maass_coeff_positive(w12, 1, 1, 1e-3);
    const auto qf = maass_coeff_positive(w12, 1, 1, 1e-8);
    CHECK(std::fabs(mid(qf.value.re) - mid(qc.value.re)) <= qc.total_bound() + qf.total_bound());
}

TEST_CASE("Q(-1,4,1) is E_10 / Delta and Q(-1,14,1) is 1 / Delta")
{
    // S_4(1) = S_14(1) = 0, so these Maass forms are weakly holomorphic with principal part q^-1.
    const WeightProfile w4{Weight(4), 1};
    const QSeries e10 = tau_coeffs(1, 10, 3);
    CHECK(agrees(maass_coeff_zero(w4, 1, 1e-3), e10.coeff(0)));
    CHECK(agrees(maass_coeff_positive(w4, 1, 1, 1e-2), e10.coeff(1)));

    const WeightProfile w14{Weight(14), 1};
    const QSeries inv = tau_coeffs(1, 0, 3);
    CHECK(agrees(maass_coeff_zero(w14, 1, 1e-6), inv.coeff(0)));
    for (long n = 1; n <= 3; ++n) {
        CHECK(agrees(maass_coeff_positive(w14, 1, n, 1e-4), inv.coeff(static_cast<int>(n))));
        // and the cusp form P(1,14,1) vanishes identically
        CHECK(agrees(classical_coeff(w14, 1, n, 1e-6), 0));
    }
}

TEST_CASE("Maass coefficient signs and the constant-term envelope")
{
    const auto b = maass_coeff_positive(w12, 1, 1, 1e-6);
    CHECK(mid(b.value.re) < 0);
    const double pi = std::acos(-1.0);
    const auto b0 = maass_coeff_zero(w12, 1, 1e-10);
    double env = 0;
    for (long c = 1; c <= 1000; ++c) {
        env += c / std::pow(double(c), 12);
    }
    env *= std::pow(2 * pi, 12) / std::tgamma(12);
    CHECK(std::fabs(mid(b0.value.re)) <= env + b0.total_bound());
    CHECK(b0.tail_bound <= 1e-10);
    CHECK(tail_bound(CoeffFamily::maass_zero, w12, 1, 0, 100) <=
          std::pow(2 * pi, 12) / std::tgamma(12) * std::pow(100.0, -10) / 10 * (1 + 1e-9));
}

TEST_CASE("xi-duality between a(m,k,1;n) and b(-m,k,1;-n) at k = 12")
{
    const double pi = std::acos(-1.0);
    for (long m = 1; m <= 2; ++m) {
        for (long n = 1; n <= 3; ++n) {
            const auto a = classical_coeff(w12, m, n, 1e-12);
            const auto b = maass_coeff_negative(w12, m, -n, 1e-20);
            double bv = mid(b.value.re);
            if (m == n) {
                bv -= 1.0 / std::tgamma(11);
            }
            const double lhs = std::pow(4 * pi * m, 11) / std::tgamma(11) * mid(a.value.re);
            const double rhs = -std::pow(4 * pi, 11) * bv * std::pow(double(n), 11);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }
}

TEST_CASE("half-integral weight coefficients come out real")
{
    const WeightProfile w{HalfInteger::from_twice(15), 4};
    for (long n = 1; n <= 3; ++n) {
        const auto a = classical_coeff(w, 1, n, 1e-5);
        CHECK(std::fabs(mid(a.value.im)) <= a.total_bound());
        const auto b = maass_coeff_positive(w, 1, n, 1e-4);
        CHECK(std::fabs(mid(b.value.im)) <= b.total_bound());
    }
}

TEST_CASE("thread count does not change a single bit")
{
    SumOptions one;
    SumOptions many;
    many.threads = 3;
    const auto a = classical_coeff(w12, 1, 3, 1e-12, one);
    const auto b = classical_coeff(w12, 1, 3, 1e-12, many);
    CHECK(mpfr_equal_p(a.value.re.value.get(), b.value.re.value.get()));
    CHECK(a.value.re.abs_error == b.value.re.abs_error);
    const WeightProfile w{HalfInteger::from_twice(9), 4};
    const auto c = classical_coeff(w, 2, 3, 1e-4, one);
    const auto d = classical_coeff(w, 2, 3, 1e-4, many);
    CHECK(mpfr_equal_p(c.value.re.value.get(), d.value.re.value.get()));
    CHECK(mpfr_equal_p(c.value.im.value.get(), d.value.im.value.get()));
}

TEST_CASE("weight 2 runs in flagged heuristic mode")
{
    const WeightProfile w2{Weight(2), 11};
    const auto a = classical_coeff(w2, 1, 1, 1.0);
    CHECK(a.heuristic);
    CHECK(a.cutoff % 11 == 0);
}

TEST_CASE("argument validation and unreachable targets")
{
    CHECK_THROWS_AS(classical_coeff(w12, 0, 1, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(classical_coeff(w12, 1, 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(maass_coeff_negative(w12, 1, 2, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(maass_coeff_positive(w12, 1, 0, 1e-6), std::invalid_argument);
    SumOptions low;
    low.precision = 64;
    CHECK_THROWS_AS(classical_coeff(w24, 1, 1, 1e-20, low), UnreachableTolerance);
    SumOptions small;
    small.max_cutoff = 10;
    CHECK_THROWS_AS(maass_coeff_zero(WeightProfile(Weight(4), 1), 1, 1e-9, small), UnreachableTolerance);
}
