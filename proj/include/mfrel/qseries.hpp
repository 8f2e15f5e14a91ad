#pragma once

// Truncated Laurent series in q with exact rational coefficients, and the
// level-one generators built from them: E_s, Delta, j, E_s / Delta^r and the
// echelon ("Miller") basis of S_k(1).

#include <gmpxx.h>

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace mfrel {

/// sum_{n = lowest}^{trunc} a_n q^n + O(q^{trunc + 1}).
///
/// Coefficients beyond trunc_order are unknown, not zero. Every operation
/// reports the largest order it can guarantee and never pads with zeros.
class QSeries {
public:
    /// The zero series known through q^trunc_order.
    explicit QSeries(int trunc_order = 0);
    /// Coefficients of q^lowest, q^{lowest+1}, ...; entries past trunc_order are dropped.
    QSeries(int lowest_exponent, std::vector<mpq_class> coeffs, int trunc_order);

    static QSeries monomial(const mpq_class &c, int exponent, int trunc_order);
    static QSeries one(int trunc_order) { return monomial(1, 0, trunc_order); }

    /// Exponent of the first nonzero coefficient; trunc_order + 1 for the zero series.
    int lowest_exponent() const { return lowest_; }
    int trunc_order() const { return trunc_; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<mpq_class> &coefficients() const { return coeffs_; }

    /// Coefficient of q^n. Throws std::out_of_range when n > trunc_order.
    mpq_class coeff(int n) const;
    mpq_class leading_coefficient() const;

    /// Same series, forgetting everything above q^order (order <= trunc_order).
    QSeries truncated(int order) const;
    /// Only the strictly negative powers, known through q^{-1}.
    QSeries principal_part() const;

    bool has_integer_coefficients() const;

    QSeries &operator+=(const QSeries &other);
    QSeries &operator-=(const QSeries &other);
    QSeries &operator*=(const QSeries &other);
    QSeries &operator*=(const mpq_class &c);

    friend QSeries operator+(QSeries a, const QSeries &b) { return a += b; }
    friend QSeries operator-(QSeries a, const QSeries &b) { return a -= b; }
    friend QSeries operator*(QSeries a, const QSeries &b) { return a *= b; }
    friend QSeries operator*(QSeries a, const mpq_class &c) { return a *= c; }
    friend QSeries operator-(QSeries a) { return a *= mpq_class(-1); }

    bool operator==(const QSeries &) const = default;

    /// "q^-1 + 744 + 196884*q + O(q^2)"
    std::string to_string() const;

private:
    void normalize();

    int lowest_;
    int trunc_;
    std::vector<mpq_class> coeffs_;
};

/// 1/f with the same relative precision as f. Throws std::domain_error for the zero series.
QSeries inverse(const QSeries &f);
/// f^e for any integer e (negative exponents invert first). pow(f, 0) is 1.
QSeries pow(const QSeries &f, int e);

/// Polynomial in q^{-1}: map m -> coefficient of q^{-m}.
class PrincipalPart {
public:
    PrincipalPart() = default;
    /// Zero values are dropped; keys must be positive.
    explicit PrincipalPart(const std::map<long, mpq_class> &terms);

    const std::map<long, mpq_class> &terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    long max_pole() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

    /// As a series known through q^{-1}.
    QSeries to_series() const;
    static PrincipalPart from_series(const QSeries &f);

    bool operator==(const PrincipalPart &) const = default;

private:
    std::map<long, mpq_class> terms_;
};

/// Exact Bernoulli number B_n (B_1 = -1/2).
mpq_class bernoulli(int n);
/// sigma_e(n) = sum of d^e over divisors d of n.
mpz_class divisor_sigma(long n, unsigned long e);

/// Normalized Eisenstein series E_s = 1 - (2s/B_s) sum sigma_{s-1}(n) q^n; E_0 = 1.
/// s must be 0 or an even integer >= 4.
QSeries eisenstein(int s, int order);
/// Delta = q prod (1 - q^n)^24 through q^order.
QSeries delta(int order);
/// j = E_4^3 / Delta through q^order.
QSeries j_invariant(int order);
/// E_s / Delta^r through q^order; the q^n coefficient is tau(r, s; n).
QSeries tau_coeffs(int r, int s, int order);

/// Echelon basis g_i = q^i + O(q^{d+1}), i = 1..d, of S_k(1) with integer coefficients.
std::vector<QSeries> cusp_basis_level1(int k, int order);

/// The (s, r) with s in {0,4,6,8,10,14}, r >= 1 and s - 12r = 2 - k.
struct WeaklyHolomorphicShape {
    int s;
    int r;
};
WeaklyHolomorphicShape weakly_holomorphic_shape(int k);

/// (E_s / Delta^r) F(j) of weight 2 - k, where F lists ascending rational coefficients.
QSeries weakly_holomorphic_level1(int k, const std::vector<mpq_class> &F, int order);

/// Exact rationals as "p/q" (or "p" when integral).
std::string rational_to_string(const mpq_class &q);
mpq_class rational_from_string(const std::string &s);

/// {lowest_exponent, trunc_order, coeffs: ["p/q", ...]}
nlohmann::json to_json(const QSeries &f);
QSeries qseries_from_json(const nlohmann::json &j);

} // namespace mfrel
