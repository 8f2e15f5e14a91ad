#include "mfrel/relations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfrel {

namespace {

mpq_class power(long base, long e)
{
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), mpz_class(base).get_mpz_t(), static_cast<unsigned long>(e));
    return mpq_class(r);
}

int even_weight(const Weight &k, const char *what)
{
    if (!k.is_integral() || k.integer() % 2 != 0) {
        throw std::invalid_argument(std::string(what) + " needs even integral k, got " + k.to_string());
    }
    return static_cast<int>(k.integer());
}

void require_level_one(const Relation &rel, const char *what)
{
    if (rel.level != 1) {
        throw std::invalid_argument(std::string(what) + " works at level 1 only, got N = " +
                                    std::to_string(rel.level));
    }
}

BoundedReal rational_ball(const mpq_class &q, Precision prec)
{
    BoundedReal b;
    b.value = BigFloat(q, prec);
    b.abs_error = half_ulp(b.value);
    return b;
}

} // namespace

std::string provenance_name(Provenance p)
{
    switch (p) {
    case Provenance::corollary: return "corollary";
    case Provenance::solver: return "solver";
    case Provenance::user: return "user";
    }
    return "user";
}

Provenance provenance_from_name(const std::string &name)
{
    if (name == "corollary") {
        return Provenance::corollary;
    }
    if (name == "solver") {
        return Provenance::solver;
    }
    if (name == "user") {
        return Provenance::user;
    }
    throw std::invalid_argument("unknown provenance '" + name + "'");
}

void Relation::validate() const
{
    (void)profile();
    bool nonzero = false;
    for (const auto &[m, a] : coeffs) {
        if (m < 1) {
            throw std::invalid_argument("relation indices must be positive, got " + std::to_string(m));
        }
        nonzero = nonzero || a != 0;
    }
    if (!nonzero) {
        throw std::invalid_argument("relation has no nonzero coefficient");
    }
}

nlohmann::json to_json(const Relation &rel)
{
    nlohmann::json coeffs = nlohmann::json::object();
    for (const auto &[m, a] : rel.coeffs) {
        if (a != 0) {
            coeffs[std::to_string(m)] = rational_to_string(a);
        }
    }
    nlohmann::json j;
    if (rel.k.is_integral()) {
        j["k"] = rel.k.integer();
    } else {
        j["k"] = rel.k.to_string();
    }
    j["N"] = rel.level;
    j["coeffs"] = coeffs;
    j["provenance"] = provenance_name(rel.provenance);
    return j;
}

Relation relation_from_json(const nlohmann::json &j)
{
    if (!j.is_object()) {
        throw std::invalid_argument("relation JSON must be an object");
    }
    Relation rel;
    const auto &k = j.at("k");
    if (k.is_number_integer()) {
        rel.k = Weight(k.get<long>());
    } else if (k.is_string()) {
        rel.k = Weight::parse(k.get<std::string>());
    } else {
        throw std::invalid_argument("relation weight must be an integer or a string like \"15/2\"");
    }
    rel.level = j.value("N", 1L);
    for (const auto &[key, value] : j.at("coeffs").items()) {
        std::size_t used = 0;
        const long m = std::stol(key, &used);
        if (used != key.size()) {
            throw std::invalid_argument("bad relation index '" + key + "'");
        }
        mpq_class a;
        if (value.is_string()) {
            a = rational_from_string(value.get<std::string>());
        } else if (value.is_number_integer()) {
            a = mpq_class(mpz_class(std::to_string(value.get<long long>())));
        } else {
            throw std::invalid_argument("relation coefficients must be \"p/q\" strings");
        }
        if (a != 0) {
            rel.coeffs[m] = a;
        }
    }
    rel.provenance = provenance_from_name(j.value("provenance", std::string("user")));
    rel.validate();
    return rel;
}

PrincipalPart relation_to_principal_part(const Relation &rel)
{
    if (!rel.k.is_integral()) {
        throw std::invalid_argument("principal parts need integral k, got " + rel.k.to_string());
    }
    const long k = rel.k.integer();
    if (k < 2) {
        throw std::invalid_argument("principal parts need k >= 2");
    }
    std::map<long, mpq_class> terms;
    for (const auto &[m, a] : rel.coeffs) {
        if (a != 0) {
            mpq_class t = a / power(m, k - 1);
            t.canonicalize();
            terms[m] = t;
        }
    }
    return PrincipalPart(terms);
}

std::optional<QSeries> solve_principal_part_level1(int k, const PrincipalPart &pp, int order)
{
    const auto shape = weakly_holomorphic_shape(k);
    if (pp.empty()) {
        throw std::invalid_argument("empty principal part");
    }
    const long M = pp.max_pole();
    const long r = shape.r;
    if (M < r) {
        // Every nonzero form E_s/Delta^r F(j) has a pole of order >= r.
        return std::nullopt;
    }
    const auto deg = static_cast<std::size_t>(M - r);

    // Column i is E_s/Delta^r j^i = q^{-r-i} + ..., so F is fixed by descending pole order.
    std::vector<QSeries> columns;
    for (std::size_t i = 0; i <= deg; ++i) {
        std::vector<mpq_class> unit(i + 1, 0);
        unit[i] = 1;
        columns.push_back(weakly_holomorphic_level1(k, unit, -1));
    }
    const QSeries target = pp.to_series();
    std::vector<mpq_class> F(deg + 1, 0);
    QSeries acc(-1);
    for (long p = M; p >= r; --p) {
        const auto i = static_cast<std::size_t>(p - r);
        const mpq_class c = target.coeff(static_cast<int>(-p)) - acc.coeff(static_cast<int>(-p));
        F[i] = c;
        if (c != 0) {
            acc += columns[i] * c;
        }
    }
    // The poles of order < r are now determined; they must agree with pp.
    for (long p = 1; p < r; ++p) {
        if (acc.coeff(static_cast<int>(-p)) != target.coeff(static_cast<int>(-p))) {
            return std::nullopt;
        }
    }
    return weakly_holomorphic_level1(k, F, std::max(order, -1));
}

Relation corollary_relation(int k)
{
    const long d = dim_cusp_forms_level1(k);
    if (d == 0) {
        throw std::invalid_argument("S_" + std::to_string(k) + "(1) = 0; no relation is forced");
    }
    const int s = static_cast<int>(14 - k + 12 * d);
    const int r = static_cast<int>(d + 1);
    const QSeries tau = tau_coeffs(r, s, -1);
    Relation rel;
    rel.k = Weight(k);
    rel.level = 1;
    rel.provenance = Provenance::corollary;
    for (long m = 1; m <= d + 1; ++m) {
        const mpq_class a = tau.coeff(static_cast<int>(-m)) * power(m, k - 1);
        if (a != 0) {
            rel.coeffs[m] = a;
        }
    }
    return rel;
}

bool dual_pairing_oracle(const Relation &rel)
{
    require_level_one(rel, "dual_pairing_oracle");
    const int k = even_weight(rel.k, "dual_pairing_oracle");
    rel.validate();
    const long top = rel.coeffs.rbegin()->first;
    for (const auto &g : cusp_basis_level1(k, static_cast<int>(top))) {
        mpq_class pairing = 0;
        for (const auto &[m, a] : rel.coeffs) {
            pairing += a * g.coeff(static_cast<int>(m)) / power(m, k - 1);
        }
        if (pairing != 0) {
            return false;
        }
    }
    return true;
}

std::vector<Relation> find_relations(int k, long m_max)
{
    (void)dim_cusp_forms_level1(k); // rejects odd or small k
    std::vector<Relation> out;
    if (m_max <= 0) {
        return out;
    }
    const auto basis = cusp_basis_level1(k, static_cast<int>(m_max));
    const auto cols = static_cast<std::size_t>(m_max);
    std::vector<std::vector<mpq_class>> A;
    for (const auto &g : basis) {
        std::vector<mpq_class> row(cols);
        for (long m = 1; m <= m_max; ++m) {
            row[static_cast<std::size_t>(m - 1)] = g.coeff(static_cast<int>(m)) / power(m, k - 1);
        }
        A.push_back(std::move(row));
    }

    // Reduced row echelon form over Q.
    std::vector<long> pivot_of_col(cols, -1);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < A.size(); ++c) {
        std::size_t p = rank;
        while (p < A.size() && A[p][c] == 0) {
            ++p;
        }
        if (p == A.size()) {
            continue;
        }
        std::swap(A[p], A[rank]);
        const mpq_class lead = A[rank][c];
        for (auto &x : A[rank]) {
            x /= lead;
        }
        for (std::size_t i = 0; i < A.size(); ++i) {
            if (i != rank && A[i][c] != 0) {
                const mpq_class f = A[i][c];
                for (std::size_t j = 0; j < cols; ++j) {
                    A[i][j] -= f * A[rank][j];
                }
            }
        }
        pivot_of_col[c] = static_cast<long>(rank);
        ++rank;
    }

    for (std::size_t free = 0; free < cols; ++free) {
        if (pivot_of_col[free] >= 0) {
            continue;
        }
        std::vector<mpq_class> v(cols, 0);
        v[free] = 1;
        for (std::size_t c = 0; c < cols; ++c) {
            if (pivot_of_col[c] >= 0) {
                v[c] = -A[static_cast<std::size_t>(pivot_of_col[c])][free];
            }
        }
        std::size_t top = cols;
        while (top > 0 && v[top - 1] == 0) {
            --top;
        }
        const long m_top = static_cast<long>(top);
        const mpq_class scale = power(m_top, k - 1) / v[top - 1];
        Relation rel;
        rel.k = Weight(k);
        rel.level = 1;
        rel.provenance = Provenance::solver;
        for (std::size_t c = 0; c < cols; ++c) {
            if (v[c] != 0) {
                mpq_class a = v[c] * scale;
                a.canonicalize();
                rel.coeffs[static_cast<long>(c + 1)] = a;
            }
        }
        out.push_back(std::move(rel));
    }
    return out;
}

std::string verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::consistent: return "consistent";
    case Verdict::refuted: return "refuted";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

VerificationReport verify_relation_numeric(const Relation &rel, long n_max, double target_error,
                                           const SumOptions &opts)
{
    rel.validate();
    if (n_max < 1) {
        throw std::invalid_argument("n_max must be positive");
    }
    if (!(target_error > 0.0)) {
        throw std::invalid_argument("target error must be positive");
    }
    const WeightProfile w = rel.profile();
    const Precision prec = opts.precision;

    std::map<long, mpq_class> alpha;
    mpq_class largest = 0;
    for (const auto &[m, a] : rel.coeffs) {
        if (a != 0) {
            alpha[m] = a;
            largest = std::max(largest, mpq_class(abs(a)));
        }
    }
    for (auto &[m, a] : alpha) {
        a /= largest;
    }
    const double scale = largest.get_d();
    const double count = static_cast<double>(alpha.size());

    VerificationReport report;
    bool all_within = true;
    bool any_refuted = false;
    for (long n = 1; n <= n_max; ++n) {
        ResidualEntry entry;
        entry.n = n;
        try {
            BoundedComplex sum;
            sum.re = exact(0, prec);
            sum.im = exact(0, prec);
            double largest_term = 0.0;
            for (const auto &[m, a] : alpha) {
                const double weight = std::fabs(a.get_d());
                const CoeffResult c = classical_coeff(w, m, n, target_error / (count * weight), opts);
                BoundedComplex v = c.value;
                v.re.abs_error = add_up(v.re.abs_error, c.tail_bound);
                v.im.abs_error = add_up(v.im.abs_error, c.tail_bound);
                const BoundedComplex term = mul(v, rational_ball(a, prec), prec);
                largest_term = std::max(largest_term, std::hypot(term.re.value.to_double(), term.im.value.to_double()));
                sum = add(sum, term, prec);
            }
            const double residual = std::hypot(sum.re.value.to_double(), sum.im.value.to_double());
            const double bound = add_up(sum.re.abs_error, sum.im.abs_error);
            if (!(residual <= bound)) {
                all_within = false;
            }
            if (residual > kRefutationMargin * bound) {
                any_refuted = true;
            }
            entry.residual = residual * scale;
            entry.bound = mul_up(bound, round_up(scale));
            entry.largest_term = largest_term * scale;
        } catch (const UnreachableTolerance &e) {
            all_within = false;
            entry.failure = e.what();
        }
        report.residuals.push_back(std::move(entry));
    }
    report.verdict = any_refuted ? Verdict::refuted : (all_within ? Verdict::consistent : Verdict::inconclusive);
    return report;
}

nlohmann::json to_json(const VerificationReport &report)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &e : report.residuals) {
        nlohmann::json row{{"n", e.n}};
        if (e.failure) {
            row["error"] = *e.failure;
        } else {
            row["residual"] = e.residual;
            row["bound"] = e.bound;
            row["largest_term"] = e.largest_term;
        }
        rows.push_back(row);
    }
    return {{"verdict", verdict_name(report.verdict)}, {"residuals", rows}};
}

} // namespace mfrel
