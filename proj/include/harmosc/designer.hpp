#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "harmosc/polynomial.hpp"

namespace harmosc {

/**
 * @brief Requirements for an oscillator characteristic polynomial.
 *
 * The designed Δ has a conjugate pair at ±j·omega_k, a real root at −σ for
 * every entry of `decays`, and the coefficients listed in `pinned` fixed to
 * the given values. decays + pinned + 2 must equal order + 1.
 */
struct DesignSpec {
    int order = 0;
    double omega_k = 0.0;         // rad/s
    std::vector<double> decays;   // positive magnitudes σ_p, root at −σ_p
    std::map<int, double> pinned; // coefficient index -> value
};

// Throws InvalidArgument / Overconstrained / Underconstrained / SingularSystem
// (repeated decay magnitudes) when the spec cannot define a unique design.
void validate(const DesignSpec& spec);

// Real and imaginary parts of Δ(jω) as linear functionals of α.
struct OscillationRows {
    std::vector<double> real;
    std::vector<double> imag;
};

OscillationRows oscillation_rows(int order, double omega_k);

// Row enforcing Δ(−σ) = 0.
std::vector<double> decay_row(int order, double sigma);

Polynomial design(const DesignSpec& spec);

/**
 * @brief Closed-form solve for one even-index and one odd-index coefficient.
 *
 * `known` must hold every coefficient index in [0, order] except `even_index`
 * and `odd_index`. Returns (α_even, α_odd) so that Δ(jω_k) = 0. Throws
 * ZeroPivot when either unknown carries zero weight in its oscillation row.
 */
std::pair<double, double> solve_two_free(int order, double omega_k, const std::map<int, double>& known,
                                         int even_index, int odd_index);

struct DesignReport {
    Polynomial polynomial;
    RootSet roots;
    std::vector<RegionClass> classes;
    Complex oscillation_residual;          // Δ(jω_k)
    std::vector<double> decay_residuals;   // Δ(−σ_p), same order as spec.decays
    bool verdict = false;
};

/**
 * Verdict is true iff every residual is below tol relative to its evaluation
 * scale, exactly one conjugate pair sits on the harmonic boundary at ±jω_k,
 * and every other root decays. Root classification uses tol·max(1, |λ|).
 */
DesignReport verify_design(const Polynomial& poly, const DesignSpec& spec,
                           double tol = kDefaultBoundaryTolerance);

}  // namespace harmosc
