#pragma once

// Fourier coefficients of the classical Poincare series P(m,k,N) and of the
// Maass-Poincare series Q(-m,k,N), summed over moduli c = N, 2N, ..., C with a
// rigorous bound on the omitted tail c > C.
//
//   a(m,k,N;n)   = delta_{mn} + 2 pi i^{-k} (n/m)^{(k-1)/2} sum K_k(m,n,c)/c J_{k-1}(4 pi sqrt(mn)/c)
//   b(-m,k,N;n)  = -2 pi i^k (m/n)^{(k-1)/2} sum K_{2-k}(-m,n,c)/c I_{k-1}(4 pi sqrt(mn)/c),       n > 0
//   b(-m,k,N;0)  = -(2 pi i)^k m^{k-1}/(k-1)! sum K_{2-k}(-m,0,c)/c^k
//   b(-m,k,N;n)  = -2 pi i^k/(k-2)! |m/n|^{(k-1)/2} sum K_{2-k}(-m,n,c)/c J_{k-1}(4 pi sqrt|mn|/c), n < 0
//
// The q^{-m} term -Gamma(k-1, 4 pi m y)/(k-2)! of the nonholomorphic part is not
// part of b(-m,k,N;-m); callers add -1/(k-2)! themselves.

#include "mfrel/bounded.hpp"
#include "mfrel/exactarith.hpp"

#include <stdexcept>
#include <string>

namespace mfrel {

/// The requested error cannot be certified within the cutoff or precision limits.
class UnreachableTolerance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SumOptions {
    Precision precision = kDefaultPrecision;
    /// Largest modulus c the summation may reach.
    long max_cutoff = 20000;
    /// Worker threads for the c-sum; results do not depend on this.
    int threads = 1;
};

enum class CoeffFamily { classical, maass_positive, maass_zero, maass_negative };

struct CoeffResult {
    CoeffFamily family = CoeffFamily::classical;
    WeightProfile weight{Weight(12), 1};
    long m = 0;
    long n = 0;
    BoundedComplex value;
    /// Rigorous bound on the omitted c > cutoff part, unless `heuristic`.
    double tail_bound = 0.0;
    /// Everything else: Bessel truncation, Kloosterman and arithmetic rounding.
    double rounding_bound = 0.0;
    long cutoff = 0;
    /// Set at k = 2, where the c-sum converges only conditionally and tail_bound is an estimate.
    bool heuristic = false;

    double total_bound() const { return add_up(tail_bound, rounding_bound); }
};

/// a(m,k,N;n), n >= 1, including the delta_{mn} term.
CoeffResult classical_coeff(const WeightProfile &w, long m, long n, double target_error,
                            const SumOptions &opts = {});

/// b(-m,k,N;n) for n >= 1 (holomorphic part of Q).
CoeffResult maass_coeff_positive(const WeightProfile &w, long m, long n, double target_error,
                                 const SumOptions &opts = {});

/// b(-m,k,N;0).
CoeffResult maass_coeff_zero(const WeightProfile &w, long m, double target_error, const SumOptions &opts = {});

/// b(-m,k,N;n) for n <= -1 (nonholomorphic part of Q), excluding the separate -1/(k-2)! at n = -m.
CoeffResult maass_coeff_negative(const WeightProfile &w, long m, long n, double target_error,
                                 const SumOptions &opts = {});

/// Rigorous bound on the part of the c-sum beyond `cutoff` for the given family (infinity for k <= 2).
double tail_bound(CoeffFamily family, const WeightProfile &w, long m, long n, long cutoff);

std::string family_name(CoeffFamily family);

} // namespace mfrel
