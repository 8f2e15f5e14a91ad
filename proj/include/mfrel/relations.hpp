#pragma once

// Linear relations sum alpha_m P(m,k,N) == 0 among cuspidal Poincare series.
//
// At level one a relation exists exactly when sum alpha_m m^{1-k} q^{-m} is the
// principal part of a weakly holomorphic form of weight 2 - k, which is decided
// here in exact arithmetic. At any level relations can also be checked
// numerically against the coefficients a(m,k,N;n).

#include "mfrel/exactarith.hpp"
#include "mfrel/poincare.hpp"
#include "mfrel/qseries.hpp"

#include <gmpxx.h>

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mfrel {

enum class Provenance { corollary, solver, user };

std::string provenance_name(Provenance p);
Provenance provenance_from_name(const std::string &name);

struct Relation {
    Weight k{12};
    long level = 1;
    /// m -> alpha_m; zero entries are ignored.
    std::map<long, mpq_class> coeffs;
    Provenance provenance = Provenance::user;

    WeightProfile profile() const { return WeightProfile(k, level); }
    /// Throws std::invalid_argument unless the weight profile is valid, every
    /// index is positive and some coefficient is nonzero.
    void validate() const;
};

/// {k, N, coeffs: {"m": "p/q"}, provenance}. Half-integral k is written as "15/2".
nlohmann::json to_json(const Relation &rel);
Relation relation_from_json(const nlohmann::json &j);

/// sum alpha_m / m^{k-1} q^{-m}. Needs integral k.
PrincipalPart relation_to_principal_part(const Relation &rel);

/// A weight 2-k form on SL2(Z) whose strictly negative part is exactly pp, or
/// nothing if none exists. The result is known through q^order.
std::optional<QSeries> solve_principal_part_level1(int k, const PrincipalPart &pp, int order = 64);

/// alpha_m = tau(d_k + 1, s; -m) m^{k-1}, m = 1..d_k+1, with s = 14 - k + 12 d_k.
Relation corollary_relation(int k);

/// Exact check that sum alpha_m a_g(m) / m^{k-1} vanishes for every g in the
/// echelon basis of S_k(1). Level one, even k only.
bool dual_pairing_oracle(const Relation &rel);

/// Basis of all level-one relations supported on 1..m_max, each scaled so its
/// largest index m carries alpha_m = m^{k-1}. Empty for m_max <= 0.
std::vector<Relation> find_relations(int k, long m_max);

enum class Verdict { consistent, refuted, inconclusive };
std::string verdict_name(Verdict v);

struct ResidualEntry {
    long n = 0;
    /// |sum alpha_m a(m,k,N;n)| at the midpoint.
    double residual = 0.0;
    /// Rigorous radius of the residual (tail, rounding and coefficient errors).
    double bound = 0.0;
    /// max_m |alpha_m a(m,k,N;n)|.
    double largest_term = 0.0;
    /// Set when the coefficients could not be certified to the requested error.
    std::optional<std::string> failure;
};

struct VerificationReport {
    std::vector<ResidualEntry> residuals;
    Verdict verdict = Verdict::inconclusive;
};

/// residual > kRefutationMargin * bound refutes a relation.
inline constexpr double kRefutationMargin = 10.0;

/// Evaluates the residual of rel at n = 1..n_max. The relation is first scaled
/// so that max |alpha_m| = 1; target_error applies to that scaled residual, so
/// the verdict does not depend on the overall scaling of rel.
VerificationReport verify_relation_numeric(const Relation &rel, long n_max, double target_error,
                                           const SumOptions &opts = {});

nlohmann::json to_json(const VerificationReport &report);

} // namespace mfrel
