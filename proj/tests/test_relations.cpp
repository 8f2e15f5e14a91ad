#include "mfrel/relations.hpp"

#include <doctest.h>

using namespace mfrel;

using Terms = std::map<long, mpq_class>;

namespace {

mpz_class ipow(long b, unsigned long e)
{
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), e);
    return r;
}

Relation make(long k, std::map<long, mpq_class> coeffs, long N = 1)
{
    Relation r;
    r.k = Weight(k);
    r.level = N;
    r.coeffs = std::move(coeffs);
    return r;
}

// Divides out E_s and peels off powers of j; true when Delta^r f / E_s is a polynomial in j.
bool is_polynomial_in_j(int k, const QSeries &f)
{
    const auto [s, r] = weakly_holomorphic_shape(k);
    const int order = f.trunc_order();
    QSeries rest = f * pow(delta(order + r + 1), r) * inverse(eisenstein(s, order + r + 1));
    const QSeries j = j_invariant(order + r + 2);
    while (!rest.is_zero() && rest.lowest_exponent() < 0) {
        const int e = -rest.lowest_exponent();
        rest -= pow(j, e) * rest.leading_coefficient();
    }
    if (rest.is_zero()) {
        return true;
    }
    // only a constant may remain
    for (int n = 1; n <= rest.trunc_order(); ++n) {
        if (rest.coeff(n) != 0) {
            return false;
        }
    }
    return rest.lowest_exponent() >= 0;
}

} // namespace

TEST_CASE("relations map to principal parts by alpha_m / m^{k-1}")
{
    CHECK(relation_to_principal_part(make(12, {{1, 1}})) == PrincipalPart(Terms{{1, 1}}));
    CHECK(relation_to_principal_part(make(24, {{2, mpq_class(ipow(2, 23))}})) == PrincipalPart(Terms{{2, 1}}));
    const auto pp = relation_to_principal_part(corollary_relation(24));
    CHECK(pp == PrincipalPart(Terms{{1, -195660}, {2, 48}, {3, 1}}));
    Relation half = make(12, {{1, 1}}, 4);
    half.k = HalfInteger::from_twice(15);
    CHECK_THROWS_AS(relation_to_principal_part(half), std::invalid_argument);
}

TEST_CASE("the solver rebuilds E_14 / Delta^3 and refuses obstructed principal parts")
{
    const PrincipalPart pp({{3, 1}, {2, 48}, {1, -195660}});
    const auto f = solve_principal_part_level1(24, pp, 10);
    REQUIRE(f.has_value());
    CHECK(*f == tau_coeffs(3, 14, 10));

    CHECK_FALSE(solve_principal_part_level1(24, PrincipalPart(Terms{{1, 1}})).has_value());
    CHECK_FALSE(solve_principal_part_level1(24, PrincipalPart(Terms{{2, 1}})).has_value());

    const auto g = solve_principal_part_level1(4, PrincipalPart(Terms{{1, 1}}), 8);
    REQUIRE(g.has_value());
    CHECK(PrincipalPart::from_series(*g) == PrincipalPart(Terms{{1, 1}}));
    CHECK(*g == tau_coeffs(1, 10, 8));

    CHECK_THROWS_AS(solve_principal_part_level1(7, pp), std::invalid_argument);
    CHECK_THROWS_AS(solve_principal_part_level1(2, pp), std::invalid_argument);
    CHECK_THROWS_AS(solve_principal_part_level1(24, PrincipalPart()), std::invalid_argument);
}

TEST_CASE("solver output has the requested principal part and is E_s / Delta^r times a polynomial in j")
{
    for (int k = 4; k <= 40; k += 2) {
        const long d = dim_cusp_forms_level1(k);
        for (long M = 1; M <= d + 4; ++M) {
            std::map<long, mpq_class> terms;
            for (long m = 1; m <= M; ++m) {
                terms[m] = mpq_class(static_cast<long>((m * 7 + k) % 5) - 2, m);
            }
            terms[M] = 1;
            const PrincipalPart pp(terms);
            const auto f = solve_principal_part_level1(k, pp, 12);
            if (f) {
                CAPTURE(k);
                CAPTURE(M);
                CHECK(PrincipalPart::from_series(*f) == pp);
                CHECK(is_polynomial_in_j(k, *f));
            }
        }
    }
}

TEST_CASE("corollary relations")
{
    const Relation r24 = corollary_relation(24);
    CHECK(r24.coeffs.at(1) == -195660);
    CHECK(r24.coeffs.at(2) == 48 * ipow(2, 23));
    CHECK(r24.coeffs.at(3) == ipow(3, 23));
    CHECK(r24.provenance == Provenance::corollary);

    const Relation r12 = corollary_relation(12);
    const QSeries t = tau_coeffs(2, 14, -1);
    CHECK(r12.coeffs.at(1) == t.coeff(-1));
    CHECK(r12.coeffs.at(2) == t.coeff(-2) * ipow(2, 11));

    CHECK(corollary_relation(16).coeffs.size() == 2);
    CHECK_THROWS_AS(corollary_relation(14), std::invalid_argument);
    CHECK_THROWS_AS(corollary_relation(4), std::invalid_argument);
}

TEST_CASE("dual pairing oracle")
{
    CHECK(dual_pairing_oracle(corollary_relation(24)));
    CHECK_FALSE(dual_pairing_oracle(make(24, {{1, 1}})));
    CHECK(dual_pairing_oracle(make(4, {{1, 1}, {5, -3}})));
    CHECK(dual_pairing_oracle(make(14, {{2, 1}})));
    CHECK_THROWS_AS(dual_pairing_oracle(make(24, {{1, 1}}, 2)), std::invalid_argument);
    Relation odd = make(12, {{1, 1}});
    odd.k = Weight(11);
    CHECK_THROWS_AS(dual_pairing_oracle(odd), std::invalid_argument);
}

TEST_CASE("find_relations: examples and kernel dimensions")
{
    const auto r3 = find_relations(24, 3);
    REQUIRE(r3.size() == 1);
    CHECK(r3[0].coeffs == corollary_relation(24).coeffs);
    CHECK(find_relations(24, 2).empty());
    CHECK(find_relations(24, 0).empty());

    for (int k = 4; k <= 40; k += 2) {
        const long d = dim_cusp_forms_level1(k);
        for (long mmax = 1; mmax <= d + 5; ++mmax) {
            const auto rels = find_relations(k, mmax);
            CAPTURE(k);
            CAPTURE(mmax);
            CHECK(static_cast<long>(rels.size()) == std::max(0L, mmax - d));
            for (const auto &rel : rels) {
                CHECK(dual_pairing_oracle(rel));
                CHECK(solve_principal_part_level1(k, relation_to_principal_part(rel), 4).has_value());
                const long top = rel.coeffs.rbegin()->first;
                CHECK(rel.coeffs.rbegin()->second == ipow(top, static_cast<unsigned long>(k - 1)));
            }
        }
    }
    for (int k = 12; k <= 40; k += 2) {
        if (dim_cusp_forms_level1(k) > 0) {
            const Relation c = corollary_relation(k);
            CHECK(dual_pairing_oracle(c));
            CHECK(solve_principal_part_level1(k, relation_to_principal_part(c), 4).has_value());
        }
    }
}

TEST_CASE("numeric verification")
{
    const auto ok = verify_relation_numeric(corollary_relation(24), 5, 1e-12);
    CHECK(ok.verdict == Verdict::consistent);
    REQUIRE(ok.residuals.size() == 5);
    for (const auto &e : ok.residuals) {
        CHECK(e.residual <= e.bound);
        CHECK(e.residual <= 1e-6 * e.largest_term);
    }

    const auto bad = verify_relation_numeric(make(24, {{1, 1}}), 2, 1e-9);
    CHECK(bad.verdict == Verdict::refuted);
    CHECK(bad.residuals[0].residual == doctest::Approx(1.0001008527).epsilon(1e-9));

    // The verdict ignores the overall scale, including the sign.
    Relation scaled = corollary_relation(24);
    for (auto &[m, a] : scaled.coeffs) {
        a *= mpq_class(-7, 3);
    }
    CHECK(verify_relation_numeric(scaled, 3, 1e-12).verdict == Verdict::consistent);
    Relation scaled_bad = make(24, {{1, mpq_class(-5, 11)}});
    CHECK(verify_relation_numeric(scaled_bad, 2, 1e-9).verdict == Verdict::refuted);

    // At k = 36 the lone series P(1,36,1) and P(2,36,1) are nonzero; at k = 14 P(1,14,1) vanishes.
    CHECK(verify_relation_numeric(make(36, {{1, 1}}), 3, 1e-9).verdict == Verdict::refuted);
    CHECK(verify_relation_numeric(make(36, {{2, 1}}), 3, 1e-9).verdict == Verdict::refuted);
    CHECK(verify_relation_numeric(make(14, {{1, 1}}), 3, 1e-6).verdict == Verdict::consistent);

    // Unreachable targets become an inconclusive verdict rather than an exception.
    SumOptions low;
    low.precision = 64;
    const auto inc = verify_relation_numeric(corollary_relation(24), 1, 1e-30, low);
    CHECK(inc.verdict == Verdict::inconclusive);
    CHECK(inc.residuals[0].failure.has_value());
}

TEST_CASE("numeric verification works at higher level and half-integral weight")
{
    // S_{15/2}(4) is small; a random pair of series is not a relation.
    Relation r;
    r.k = HalfInteger::from_twice(15);
    r.level = 4;
    r.coeffs = {{1, 1}, {2, -1}};
    CHECK(verify_relation_numeric(r, 2, 1e-5).verdict == Verdict::refuted);
}

TEST_CASE("relation JSON round trip")
{
    const Relation r = corollary_relation(24);
    const auto j = to_json(r);
    CHECK(j.at("k") == 24);
    CHECK(j.at("coeffs").at("3") == "94143178827");
    CHECK(j.at("provenance") == "corollary");
    const Relation back = relation_from_json(j);
    CHECK(back.coeffs == r.coeffs);
    CHECK(back.k == r.k);

    Relation h;
    h.k = HalfInteger::from_twice(15);
    h.level = 4;
    h.coeffs = {{1, mpq_class(1, 3)}};
    const auto hj = to_json(h);
    CHECK(hj.at("k") == "15/2");
    CHECK(relation_from_json(hj).k == h.k);
    CHECK(relation_from_json(hj).coeffs.at(1) == mpq_class(1, 3));

    CHECK_THROWS_AS(relation_from_json(nlohmann::json::parse(R"({"k":24,"N":1,"coeffs":{}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(relation_from_json(nlohmann::json::parse(R"({"k":"15/2","N":2,"coeffs":{"1":"1"}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(relation_from_json(nlohmann::json::parse(R"({"k":24,"coeffs":{"0":"1"}})")),
                    std::invalid_argument);
}
