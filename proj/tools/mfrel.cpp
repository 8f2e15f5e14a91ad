// mfrel: coefficients of Poincare series, exact q-expansions, and linear relations.
//
// Exit codes: 0 success, 1 relation refuted, 2 invalid input, 3 error target not certified.

#include "mfrel/poincare.hpp"
#include "mfrel/qseries.hpp"
#include "mfrel/relations.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using nlohmann::json;
using namespace mfrel;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitUnreachable = 3;

struct RunConfig {
    long precision_bits = 128;
    double target_error = 1e-9;
    int series_order = 64;
    std::string output = "pretty";
    int threads = 1;
    long max_cutoff = 20000;

    SumOptions sum_options() const
    {
        SumOptions o;
        o.precision = precision_bits;
        o.threads = threads;
        o.max_cutoff = max_cutoff;
        return o;
    }

    void validate() const
    {
        if (precision_bits < 64) {
            throw std::invalid_argument("--precision must be at least 64 bits");
        }
        if (!(target_error > 0.0)) {
            throw std::invalid_argument("--target-error must be positive");
        }
        if (series_order < 1) {
            throw std::invalid_argument("--order must be at least 1");
        }
        if (threads < 1) {
            throw std::invalid_argument("--threads must be at least 1");
        }
    }
};

long default_precision()
{
    if (const char *env = std::getenv("MFREL_PRECISION"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            const long p = std::stol(env, &used);
            if (used == std::string(env).size()) {
                return p;
            }
        } catch (const std::exception &) {
        }
        throw std::invalid_argument(std::string("MFREL_PRECISION is not an integer: '") + env + "'");
    }
    return 128;
}

std::string format_double(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// Fixed notation with enough decimals to show the digits the error bound supports.
std::string fixed_for_bound(const BigFloat &x, double bound)
{
    int decimals = 40;
    if (bound > 0.0 && std::isfinite(bound)) {
        decimals = std::clamp(static_cast<int>(std::ceil(-std::log10(bound))) + 2, 1, 60);
    }
    char *buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rf", decimals, x.get());
    std::string out = buf;
    mpfr_free_str(buf);
    return out;
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        if (!cur.empty()) {
            out.push_back(cur);
        }
    }
    return out;
}

// ---- coeff ----------------------------------------------------------------

struct CoeffArgs {
    std::string family;
    long m = 1;
    std::string k = "12";
    long N = 1;
    long n = 1;
};

int cmd_coeff(const CoeffArgs &a, const RunConfig &cfg)
{
    const WeightProfile w(Weight::parse(a.k), a.N);
    const SumOptions opts = cfg.sum_options();
    CoeffResult r;
    if (a.family == "P") {
        r = classical_coeff(w, a.m, a.n, cfg.target_error, opts);
    } else if (a.family == "Qplus") {
        r = maass_coeff_positive(w, a.m, a.n, cfg.target_error, opts);
    } else if (a.family == "Qzero") {
        if (a.n != 0 && a.n != 1) {
            throw std::invalid_argument("Qzero takes no --n (constant term)");
        }
        r = maass_coeff_zero(w, a.m, cfg.target_error, opts);
    } else if (a.family == "Qminus") {
        r = maass_coeff_negative(w, a.m, a.n, cfg.target_error, opts);
    } else {
        throw std::invalid_argument("unknown family '" + a.family + "' (P, Qplus, Qzero, Qminus)");
    }

    const int digits = static_cast<int>(cfg.precision_bits * 0.30103) + 1;
    const std::string re = r.value.re.value.to_string(digits);
    const std::string im = r.value.im.value.to_string(digits);
    const bool show_im = !w.k().is_integral();
    if (cfg.output == "json") {
        json j{{"family", a.family},
               {"k", w.k().to_string()},
               {"N", w.level()},
               {"m", r.m},
               {"n", r.n},
               {"value", re},
               {"value_im", im},
               {"error_bound", r.total_bound()},
               {"tail_bound", r.tail_bound},
               {"rounding_bound", r.rounding_bound},
               {"cutoff", r.cutoff},
               {"heuristic", r.heuristic}};
        std::cout << j.dump(2) << "\n";
    } else if (cfg.output == "csv") {
        std::cout << "family,k,N,m,n,value,value_im,error_bound,cutoff,heuristic\n"
                  << a.family << "," << w.k().to_string() << "," << w.level() << "," << r.m << "," << r.n << ","
                  << re << "," << im << "," << format_double(r.total_bound()) << "," << r.cutoff << ","
                  << (r.heuristic ? "true" : "false") << "\n";
    } else {
        const std::string name = a.family == "P" ? "a" : "b";
        const std::string first = a.family == "P" ? std::to_string(r.m) : "-" + std::to_string(r.m);
        std::cout << name << "(" << first << "," << w.k().to_string() << "," << w.level() << ";" << r.n
                  << ") = " << fixed_for_bound(r.value.re.value, r.total_bound());
        if (show_im) {
            std::cout << " + (" << fixed_for_bound(r.value.im.value, r.total_bound()) << ")*i";
        }
        std::cout << "\n  error bound " << format_double(r.total_bound()) << " (tail " << format_double(r.tail_bound)
                  << ", rounding " << format_double(r.rounding_bound) << "), cutoff C = " << r.cutoff
                  << (r.heuristic ? ", heuristic" : "") << "\n";
    }
    return kExitOk;
}

// ---- qexp -----------------------------------------------------------------

struct QexpArgs {
    std::string expr;
    int s = 4;
    int r = 1;
    int k = 24;
    std::string F = "1";
    int order = 64;
};

void print_series(const QSeries &f, const std::string &label, const RunConfig &cfg)
{
    if (cfg.output == "json") {
        json j = to_json(f);
        j["expression"] = label;
        std::cout << j.dump(2) << "\n";
    } else if (cfg.output == "csv") {
        std::cout << "exponent,coefficient\n";
        for (int e = f.lowest_exponent(); e <= f.trunc_order(); ++e) {
            std::cout << e << "," << rational_to_string(f.coeff(e)) << "\n";
        }
    } else {
        std::cout << label << " = " << f.to_string() << "\n";
    }
}

int cmd_qexp(const QexpArgs &a, const RunConfig &cfg)
{
    const int order = a.order;
    QSeries f;
    std::string label = a.expr;
    if (a.expr == "j") {
        f = j_invariant(order);
    } else if (a.expr == "Delta") {
        f = delta(order);
    } else if (a.expr == "Es") {
        f = eisenstein(a.s, order);
        label = "E_" + std::to_string(a.s);
    } else if (a.expr == "Es/Delta^r") {
        f = tau_coeffs(a.r, a.s, order);
        label = "E_" + std::to_string(a.s) + "/Delta^" + std::to_string(a.r);
    } else if (a.expr == "wh") {
        std::vector<mpq_class> F;
        for (const auto &t : split(a.F, ',')) {
            F.push_back(rational_from_string(t));
        }
        f = weakly_holomorphic_level1(a.k, F, order);
        const auto shape = weakly_holomorphic_shape(a.k);
        label = "E_" + std::to_string(shape.s) + "/Delta^" + std::to_string(shape.r) + " * F(j)";
    } else {
        throw std::invalid_argument("unknown expression '" + a.expr + "' (j, Delta, Es, Es/Delta^r, wh)");
    }
    print_series(f, label, cfg);
    return kExitOk;
}

// ---- relation -------------------------------------------------------------

struct RelationArgs {
    std::string action;
    std::string k;
    long N = 1;
    std::string file;
    long nmax = 5;
    long mmax = 0;
    std::string pp;
};

void print_relations(const std::vector<Relation> &rels, const RunConfig &cfg)
{
    if (cfg.output == "json") {
        json arr = json::array();
        for (const auto &r : rels) {
            arr.push_back(to_json(r));
        }
        std::cout << arr.dump(2) << "\n";
    } else if (cfg.output == "csv") {
        std::cout << "relation,k,N,m,alpha\n";
        for (std::size_t i = 0; i < rels.size(); ++i) {
            for (const auto &[m, alpha] : rels[i].coeffs) {
                std::cout << i << "," << rels[i].k.to_string() << "," << rels[i].level << "," << m << ","
                          << rational_to_string(alpha) << "\n";
            }
        }
    } else {
        if (rels.empty()) {
            std::cout << "no relations\n";
        }
        for (const auto &r : rels) {
            std::cout << "k=" << r.k.to_string() << " N=" << r.level << " (" << provenance_name(r.provenance)
                      << "):";
            bool first = true;
            for (const auto &[m, alpha] : r.coeffs) {
                std::cout << (first ? " " : " + ") << "(" << rational_to_string(alpha) << ")*P(" << m << ")";
                first = false;
            }
            std::cout << " = 0\n";
        }
    }
}

int even_k(const std::string &text)
{
    const Weight k = Weight::parse(text);
    if (!k.is_integral()) {
        throw std::invalid_argument("exact relations need integral k, got " + text);
    }
    return static_cast<int>(k.integer());
}

int cmd_relation(const RelationArgs &a, const RunConfig &cfg)
{
    if (a.action == "corollary") {
        const Relation rel = corollary_relation(even_k(a.k));
        if (cfg.output == "json") {
            std::cout << to_json(rel).dump(2) << "\n";
        } else {
            print_relations({rel}, cfg);
        }
        return kExitOk;
    }
    if (a.action == "find") {
        if (a.mmax < 1) {
            throw std::invalid_argument("--mmax must be positive");
        }
        print_relations(find_relations(even_k(a.k), a.mmax), cfg);
        return kExitOk;
    }
    if (a.action == "solve") {
        std::map<long, mpq_class> terms;
        for (const auto &t : split(a.pp, ',')) {
            const auto colon = t.find(':');
            if (colon == std::string::npos) {
                throw std::invalid_argument("--pp entries look like m:coefficient, got '" + t + "'");
            }
            terms[std::stol(t.substr(0, colon))] = rational_from_string(t.substr(colon + 1));
        }
        const auto f = solve_principal_part_level1(even_k(a.k), PrincipalPart(terms), cfg.series_order);
        if (!f) {
            if (cfg.output == "json") {
                std::cout << json{{"exists", false}}.dump(2) << "\n";
            } else {
                std::cout << "no weakly holomorphic form has this principal part\n";
            }
            return kExitOk;
        }
        print_series(*f, "solution", cfg);
        return kExitOk;
    }
    if (a.action == "verify") {
        if (a.file.empty()) {
            throw std::invalid_argument("relation verify needs --file");
        }
        std::ifstream in(a.file);
        if (!in) {
            throw std::invalid_argument("cannot open '" + a.file + "'");
        }
        json j;
        try {
            in >> j;
        } catch (const json::exception &e) {
            throw std::invalid_argument(std::string("bad relation JSON: ") + e.what());
        }
        std::vector<Relation> rels;
        if (j.is_array()) {
            for (const auto &item : j) {
                rels.push_back(relation_from_json(item));
            }
        } else {
            rels.push_back(relation_from_json(j));
        }
        if (rels.empty()) {
            throw std::invalid_argument("no relation in '" + a.file + "'");
        }
        int status = kExitOk;
        json reports = json::array();
        for (const auto &rel : rels) {
            if (!a.k.empty() && !(Weight::parse(a.k) == rel.k)) {
                throw std::invalid_argument("--k " + a.k + " disagrees with the file (k = " + rel.k.to_string() + ")");
            }
            if (a.N != rel.level) {
                throw std::invalid_argument("--N " + std::to_string(a.N) + " disagrees with the file (N = " +
                                            std::to_string(rel.level) + ")");
            }
            const auto report = verify_relation_numeric(rel, a.nmax, cfg.target_error, cfg.sum_options());
            if (cfg.output == "json") {
                reports.push_back(to_json(report));
            } else if (cfg.output == "csv") {
                std::cout << "n,residual,bound,largest_term,error\n";
                for (const auto &e : report.residuals) {
                    std::cout << e.n << "," << format_double(e.residual) << "," << format_double(e.bound) << ","
                              << format_double(e.largest_term) << "," << e.failure.value_or("") << "\n";
                }
            } else {
                for (const auto &e : report.residuals) {
                    std::cout << "n=" << e.n << ": ";
                    if (e.failure) {
                        std::cout << "not certified: " << *e.failure << "\n";
                    } else {
                        std::cout << "|residual| " << format_double(e.residual) << ", bound "
                                  << format_double(e.bound) << ", largest term " << format_double(e.largest_term)
                                  << "\n";
                    }
                }
                std::cout << verdict_name(report.verdict) << "\n";
            }
            if (report.verdict == Verdict::refuted) {
                status = kExitRefuted;
            } else if (report.verdict == Verdict::inconclusive && status == kExitOk) {
                status = kExitUnreachable;
            }
        }
        if (cfg.output == "json") {
            std::cout << (j.is_array() ? reports : reports.front()).dump(2) << "\n";
        }
        return status;
    }
    throw std::invalid_argument("unknown relation action '" + a.action + "' (corollary, find, verify, solve)");
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Poincare series coefficients, exact q-expansions and linear relations"};
    app.require_subcommand(1);

    RunConfig cfg;
    try {
        cfg.precision_bits = default_precision();
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    app.option_defaults()->always_capture_default();
    app.add_option("--precision", cfg.precision_bits, "working precision in bits (env MFREL_PRECISION)");
    app.add_option("--target-error", cfg.target_error, "requested absolute error");
    app.add_option("--order", cfg.series_order, "q-expansion order");
    app.add_option("--output", cfg.output, "output format")->check(CLI::IsMember({"json", "csv", "pretty"}));
    app.add_option("--threads", cfg.threads, "worker threads for the c-sums");
    app.add_option("--max-cutoff", cfg.max_cutoff, "largest modulus c");

    CoeffArgs coeff;
    auto *c = app.add_subcommand("coeff", "Fourier coefficient of P(m,k,N) or Q(-m,k,N)");
    c->fallthrough();
    c->add_option("family", coeff.family, "P, Qplus, Qzero or Qminus")->required();
    c->add_option("--m", coeff.m, "index m >= 1")->required();
    c->add_option("--k", coeff.k, "weight, e.g. 24 or 15/2")->required();
    c->add_option("--N", coeff.N, "level");
    c->add_option("--n", coeff.n, "coefficient index");

    QexpArgs qexp;
    auto *q = app.add_subcommand("qexp", "exact q-expansions");
    q->fallthrough();
    q->add_option("expr", qexp.expr, "j, Delta, Es, Es/Delta^r or wh")->required();
    q->add_option("--order", qexp.order, "highest power of q shown");
    q->add_option("--s", qexp.s, "Eisenstein weight");
    q->add_option("--r", qexp.r, "power of Delta");
    q->add_option("--k", qexp.k, "k for wh: weight 2-k");
    q->add_option("--F", qexp.F, "coefficients of F(j), ascending, comma separated");

    RelationArgs rel;
    auto *r = app.add_subcommand("relation", "relations among P(m,k,N)");
    r->fallthrough();
    r->add_option("action", rel.action, "corollary, find, verify or solve")->required();
    r->add_option("--k", rel.k, "weight");
    r->add_option("--N", rel.N, "level");
    r->add_option("--file", rel.file, "relation JSON for verify");
    r->add_option("--nmax", rel.nmax, "verify coefficients n = 1..nmax");
    r->add_option("--mmax", rel.mmax, "find relations supported on m <= mmax");
    r->add_option("--pp", rel.pp, "principal part for solve, e.g. 3:1,2:48,1:-195660");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        cfg.validate();
        if (c->parsed()) {
            return cmd_coeff(coeff, cfg);
        }
        if (q->parsed()) {
            return cmd_qexp(qexp, cfg);
        }
        if (rel.action != "solve" && rel.action != "verify" && rel.k.empty()) {
            throw std::invalid_argument("relation " + rel.action + " needs --k");
        }
        return cmd_relation(rel, cfg);
    } catch (const UnreachableTolerance &e) {
        std::cerr << "unreachable: " << e.what() << "\n";
        return kExitUnreachable;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::domain_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::out_of_range &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}
