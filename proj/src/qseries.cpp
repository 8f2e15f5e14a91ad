#include "mfrel/qseries.hpp"

#include "mfrel/exactarith.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mfrel {

QSeries::QSeries(int trunc_order) : lowest_(trunc_order + 1), trunc_(trunc_order) {}

QSeries::QSeries(int lowest_exponent, std::vector<mpq_class> coeffs, int trunc_order)
    : lowest_(lowest_exponent), trunc_(trunc_order), coeffs_(std::move(coeffs))
{
    const long known = static_cast<long>(trunc_) - lowest_ + 1;
    if (known <= 0) {
        coeffs_.clear();
    } else if (static_cast<long>(coeffs_.size()) > known) {
        coeffs_.resize(static_cast<std::size_t>(known));
    }
    normalize();
}

QSeries QSeries::monomial(const mpq_class &c, int exponent, int trunc_order)
{
    return QSeries(exponent, {c}, trunc_order);
}

void QSeries::normalize()
{
    for (auto &c : coeffs_) {
        c.canonicalize();
    }
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) {
        ++lead;
    }
    if (lead == coeffs_.size()) {
        coeffs_.clear();
        lowest_ = trunc_ + 1;
        return;
    }
    if (lead > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
        lowest_ += static_cast<int>(lead);
    }
    // Known coefficients run through trunc_; pad explicit zeros up to it.
    coeffs_.resize(static_cast<std::size_t>(trunc_ - lowest_ + 1), mpq_class(0));
}

mpq_class QSeries::coeff(int n) const
{
    if (n > trunc_) {
        throw std::out_of_range("coefficient of q^" + std::to_string(n) + " is beyond the truncation order " +
                                std::to_string(trunc_));
    }
    if (n < lowest_) {
        return 0;
    }
    return coeffs_[static_cast<std::size_t>(n - lowest_)];
}

mpq_class QSeries::leading_coefficient() const { return is_zero() ? mpq_class(0) : coeffs_.front(); }

QSeries QSeries::truncated(int order) const
{
    if (order > trunc_) {
        throw std::out_of_range("cannot extend a series known through q^" + std::to_string(trunc_) + " to q^" +
                                std::to_string(order));
    }
    return QSeries(lowest_, coeffs_, order);
}

QSeries QSeries::principal_part() const { return truncated(std::min(trunc_, -1)); }

bool QSeries::has_integer_coefficients() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const mpq_class &c) { return c.get_den() == 1; });
}

QSeries &QSeries::operator+=(const QSeries &other)
{
    const int trunc = std::min(trunc_, other.trunc_);
    const int lowest = std::min(lowest_, other.lowest_);
    std::vector<mpq_class> out(static_cast<std::size_t>(std::max(0, trunc - lowest + 1)));
    for (int n = lowest; n <= trunc; ++n) {
        out[static_cast<std::size_t>(n - lowest)] = coeff(n) + other.coeff(n);
    }
    *this = QSeries(lowest, std::move(out), trunc);
    return *this;
}

QSeries &QSeries::operator-=(const QSeries &other) { return *this += -other; }

QSeries &QSeries::operator*=(const QSeries &other)
{
    const int trunc = std::min(trunc_ + other.lowest_, other.trunc_ + lowest_);
    const int lowest = lowest_ + other.lowest_;
    if (is_zero() || other.is_zero() || trunc < lowest) {
        *this = QSeries(trunc);
        return *this;
    }
    std::vector<mpq_class> out(static_cast<std::size_t>(trunc - lowest + 1), mpq_class(0));
    mpq_class prod;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < other.coeffs_.size() && i + j < out.size(); ++j) {
            if (other.coeffs_[j] == 0) {
                continue;
            }
            mpq_mul(prod.get_mpq_t(), coeffs_[i].get_mpq_t(), other.coeffs_[j].get_mpq_t());
            out[i + j] += prod;
        }
    }
    *this = QSeries(lowest, std::move(out), trunc);
    return *this;
}

QSeries &QSeries::operator*=(const mpq_class &c)
{
    for (auto &x : coeffs_) {
        x *= c;
    }
    normalize();
    return *this;
}

std::string QSeries::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const mpq_class &c = coeffs_[i];
        if (c == 0) {
            continue;
        }
        const int e = lowest_ + static_cast<int>(i);
        const bool negative = c < 0;
        const mpq_class mag = abs(c);
        if (first) {
            os << (negative ? "-" : "");
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        if (e == 0) {
            os << mag.get_str();
            continue;
        }
        if (mag != 1) {
            os << mag.get_str() << '*';
        }
        os << 'q';
        if (e != 1) {
            os << '^' << e;
        }
    }
    os << (first ? "O(q^" : " + O(q^") << trunc_ + 1 << ')';
    return os.str();
}

QSeries inverse(const QSeries &f)
{
    if (f.is_zero()) {
        throw std::domain_error("cannot invert a series whose known coefficients all vanish");
    }
    const int v = f.lowest_exponent();
    const int rel = f.trunc_order() - v; // relative precision
    const auto &u = f.coefficients();
    const mpq_class u0_inv = 1 / u[0];
    std::vector<mpq_class> w(static_cast<std::size_t>(rel + 1));
    w[0] = u0_inv;
    mpq_class acc, prod;
    for (int n = 1; n <= rel; ++n) {
        acc = 0;
        for (int i = 1; i <= n; ++i) {
            if (u[static_cast<std::size_t>(i)] == 0) {
                continue;
            }
            mpq_mul(prod.get_mpq_t(), u[static_cast<std::size_t>(i)].get_mpq_t(),
                    w[static_cast<std::size_t>(n - i)].get_mpq_t());
            acc += prod;
        }
        w[static_cast<std::size_t>(n)] = -acc * u0_inv;
    }
    return QSeries(-v, std::move(w), -v + rel);
}

QSeries pow(const QSeries &f, int e)
{
    if (e < 0) {
        return pow(inverse(f), -e);
    }
    QSeries result = QSeries::one(f.trunc_order() - f.lowest_exponent());
    if (e == 0) {
        return result;
    }
    QSeries base = f;
    bool have = false;
    while (e > 0) {
        if (e & 1) {
            result = have ? result * base : base;
            have = true;
        }
        e >>= 1;
        if (e > 0) {
            base *= base;
        }
    }
    return result;
}

PrincipalPart::PrincipalPart(const std::map<long, mpq_class> &terms)
{
    for (const auto &[m, c] : terms) {
        if (m <= 0) {
            throw std::invalid_argument("principal part exponents must be positive, got " + std::to_string(m));
        }
        mpq_class v = c;
        v.canonicalize();
        if (v != 0) {
            terms_.emplace(m, v);
        }
    }
}

QSeries PrincipalPart::to_series() const
{
    if (terms_.empty()) {
        return QSeries(-1);
    }
    const long M = max_pole();
    std::vector<mpq_class> coeffs(static_cast<std::size_t>(M), mpq_class(0));
    for (const auto &[m, c] : terms_) {
        coeffs[static_cast<std::size_t>(M - m)] = c;
    }
    return QSeries(static_cast<int>(-M), std::move(coeffs), -1);
}

PrincipalPart PrincipalPart::from_series(const QSeries &f)
{
    std::map<long, mpq_class> terms;
    for (int n = f.lowest_exponent(); n < 0 && n <= f.trunc_order(); ++n) {
        terms.emplace(-n, f.coeff(n));
    }
    return PrincipalPart(terms);
}

mpq_class bernoulli(int n)
{
    if (n < 0) {
        throw std::invalid_argument("Bernoulli index must be nonnegative");
    }
    // sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1.
    std::vector<mpq_class> b(static_cast<std::size_t>(n + 1));
    b[0] = 1;
    for (int m = 1; m <= n; ++m) {
        mpq_class acc = 0;
        mpz_class binom = 1; // C(m+1, j)
        for (int j = 0; j < m; ++j) {
            acc += mpq_class(binom) * b[static_cast<std::size_t>(j)];
            binom = binom * (m + 1 - j) / (j + 1);
        }
        b[static_cast<std::size_t>(m)] = -acc / (m + 1);
    }
    return b[static_cast<std::size_t>(n)];
}

mpz_class divisor_sigma(long n, unsigned long e)
{
    mpz_class total = 0, p;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d != 0) {
            continue;
        }
        mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), e);
        total += p;
        if (d * d != n) {
            mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(n / d), e);
            total += p;
        }
    }
    return total;
}

namespace {

bool admissible_s(int s) { return s == 0 || s == 4 || s == 6 || s == 8 || s == 10 || s == 14; }

/// q^shift * f
QSeries shifted(const QSeries &f, int shift)
{
    return QSeries(f.lowest_exponent() + shift, f.coefficients(), f.trunc_order() + shift);
}

/// E_s for any even s >= 4 (used internally for monomials in E_4, E_6).
QSeries eisenstein_any(int s, int order)
{
    const mpq_class factor = mpq_class(-2 * s) / bernoulli(s);
    std::vector<mpq_class> coeffs(static_cast<std::size_t>(std::max(order, 0) + 1));
    coeffs[0] = 1;
    for (int n = 1; n <= order; ++n) {
        coeffs[static_cast<std::size_t>(n)] = factor * mpq_class(divisor_sigma(n, static_cast<unsigned long>(s - 1)));
    }
    return QSeries(0, std::move(coeffs), order);
}

} // namespace

QSeries eisenstein(int s, int order)
{
    if (!admissible_s(s)) {
        throw std::invalid_argument("E_s is provided for s in {0,4,6,8,10,14}, got " + std::to_string(s));
    }
    if (s == 0) {
        return QSeries::one(order);
    }
    return eisenstein_any(s, order);
}

QSeries delta(int order)
{
    if (order < 1) {
        throw std::invalid_argument("delta needs order >= 1");
    }
    // Euler: prod (1 - q^n) = sum_k (-1)^k q^{k(3k-1)/2}, k in Z.
    const int t = order - 1;
    std::vector<mpq_class> eta(static_cast<std::size_t>(t + 1), mpq_class(0));
    for (long k = 0;; ++k) {
        bool any = false;
        for (long kk : {k, -k}) {
            const long e = kk * (3 * kk - 1) / 2;
            if (e <= t) {
                eta[static_cast<std::size_t>(e)] = (k % 2 == 0) ? 1 : -1;
                any = true;
            }
        }
        if (!any) {
            break;
        }
    }
    return shifted(pow(QSeries(0, std::move(eta), t), 24), 1);
}

QSeries j_invariant(int order)
{
    if (order < -1) {
        throw std::invalid_argument("j_invariant needs order >= -1");
    }
    const QSeries e4 = eisenstein(4, order + 1);
    return (pow(e4, 3) * inverse(delta(order + 2))).truncated(order);
}

QSeries tau_coeffs(int r, int s, int order)
{
    if (r < 1) {
        throw std::invalid_argument("tau_coeffs needs r >= 1");
    }
    if (order < -r) {
        throw std::invalid_argument("tau_coeffs needs order >= -r");
    }
    const QSeries es = eisenstein(s, order + r);
    return (es * pow(delta(order + r + 1), -r)).truncated(order);
}

std::vector<QSeries> cusp_basis_level1(int k, int order)
{
    const long d = dim_cusp_forms_level1(k);
    std::vector<QSeries> basis;
    if (d == 0) {
        return basis;
    }
    if (order < d + 1) {
        order = static_cast<int>(d + 1);
    }
    const QSeries D = delta(order);
    const QSeries E4 = eisenstein(4, order);
    const QSeries E6 = eisenstein(6, order);
    QSeries dpow = D;
    for (long i = 1; i <= d; ++i) {
        const int w = k - 12 * static_cast<int>(i);
        const int b = (w % 4 == 0) ? 0 : 1;
        const int a = (w - 6 * b) / 4;
        QSeries g = dpow * pow(E4, a) * pow(E6, b);
        basis.push_back(g.truncated(order));
        dpow *= D;
    }
    // Back substitution to the echelon form q^i + O(q^{d+1}).
    for (long i = d - 1; i >= 1; --i) {
        QSeries &g = basis[static_cast<std::size_t>(i - 1)];
        for (long j = i + 1; j <= d; ++j) {
            const mpq_class c = g.coeff(static_cast<int>(j));
            if (c != 0) {
                g -= basis[static_cast<std::size_t>(j - 1)] * c;
            }
        }
    }
    return basis;
}

WeaklyHolomorphicShape weakly_holomorphic_shape(int k)
{
    if (k % 2 != 0) {
        throw std::invalid_argument("level-one weakly holomorphic forms of weight 2-k need even k, got " +
                                    std::to_string(k));
    }
    if (k < 4) {
        throw std::invalid_argument("no admissible E_s / Delta^r with r >= 1 for k = " + std::to_string(k));
    }
    const long d = dim_cusp_forms_level1(k);
    WeaklyHolomorphicShape shape{static_cast<int>(14 - k + 12 * d), static_cast<int>(d + 1)};
    if (!admissible_s(shape.s) || shape.s - 12 * shape.r != 2 - k) {
        throw std::logic_error("weight bookkeeping failed for k = " + std::to_string(k));
    }
    return shape;
}

QSeries weakly_holomorphic_level1(int k, const std::vector<mpq_class> &F, int order)
{
    const auto [s, r] = weakly_holomorphic_shape(k);
    int deg = static_cast<int>(F.size()) - 1;
    while (deg >= 0 && F[static_cast<std::size_t>(deg)] == 0) {
        --deg;
    }
    if (deg < 0) {
        return QSeries(order);
    }
    if (order < -r - deg) {
        throw std::invalid_argument("order below the pole order of the requested form");
    }
    const QSeries h = tau_coeffs(r, s, order + deg);
    const QSeries j = j_invariant(order + deg + r);
    QSeries result(order + deg);
    QSeries term = h;
    for (int i = 0; i <= deg; ++i) {
        if (F[static_cast<std::size_t>(i)] != 0) {
            result += term * F[static_cast<std::size_t>(i)];
        }
        if (i < deg) {
            term *= j;
        }
    }
    return result.truncated(order);
}

std::string rational_to_string(const mpq_class &q)
{
    mpq_class c = q;
    c.canonicalize();
    return c.get_str();
}

mpq_class rational_from_string(const std::string &s)
{
    mpq_class q;
    std::string t = s;
    if (!t.empty() && t.front() == '+') {
        t.erase(0, 1);
    }
    if (t.empty() || mpq_set_str(q.get_mpq_t(), t.c_str(), 10) != 0) {
        throw std::invalid_argument("not a rational: '" + s + "'");
    }
    if (q.get_den() == 0) {
        throw std::invalid_argument("zero denominator: '" + s + "'");
    }
    q.canonicalize();
    return q;
}

nlohmann::json to_json(const QSeries &f)
{
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto &c : f.coefficients()) {
        coeffs.push_back(rational_to_string(c));
    }
    return {{"lowest_exponent", f.lowest_exponent()}, {"trunc_order", f.trunc_order()}, {"coeffs", coeffs}};
}

QSeries qseries_from_json(const nlohmann::json &j)
{
    std::vector<mpq_class> coeffs;
    for (const auto &c : j.at("coeffs")) {
        coeffs.push_back(rational_from_string(c.get<std::string>()));
    }
    return QSeries(j.at("lowest_exponent").get<int>(), std::move(coeffs), j.at("trunc_order").get<int>());
}

} // namespace mfrel
