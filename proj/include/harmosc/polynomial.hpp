#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace harmosc {

using Complex = std::complex<double>;

inline constexpr double kDefaultZeroTolerance = 1e-12;
inline constexpr double kDefaultBoundaryTolerance = 1e-9;

/**
 * @brief Real polynomial Δ(λ) = Σ αᵢ λⁱ stored in ascending power order.
 *
 * The leading coefficient must be nonzero relative to the largest coefficient
 * magnitude; construction throws DegenerateLeadingCoefficient otherwise.
 */
class Polynomial {
   public:
    explicit Polynomial(std::vector<double> coeffs, double zero_tol = kDefaultZeroTolerance);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    double operator[](int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
    double leading() const noexcept { return coeffs_.back(); }

    // max |αᵢ|
    double max_abs_coeff() const noexcept;
    // Euclidean norm of the coefficient vector.
    double norm() const noexcept;

    Polynomial scaled(double c) const;

    // Monic product Π (λ − rᵢ); complex roots must come in conjugate pairs.
    static Polynomial from_roots(std::span<const Complex> roots, double leading = 1.0);

    bool operator==(const Polynomial&) const = default;

   private:
    std::vector<double> coeffs_;
};

// Horner evaluation of Δ at a complex point.
Complex evaluate(const Polynomial& poly, Complex lambda);
double evaluate(const Polynomial& poly, double x);
// Σ |αᵢ| |λ|ⁱ, the natural scale for rounding error in evaluate().
double evaluation_scale(const Polynomial& poly, Complex lambda);

// Requires degree >= 2 (the result must itself be a polynomial of degree >= 1).
Polynomial derivative(const Polynomial& poly);

using RootSet = std::vector<Complex>;

/**
 * @brief All n roots of the polynomial.
 *
 * Eigenvalues of the balanced companion matrix, polished by Newton steps on
 * the original coefficients. Real roots stay exactly real and complex roots
 * come out as exact conjugate pairs. Sorted by descending real part, then
 * descending imaginary part.
 */
RootSet roots(const Polynomial& poly);

struct PolarRoot {
    double magnitude = 0.0;
    double angle = 0.0;  // radians, (−π, π]
    bool degenerate = false;  // set for the origin, where the angle is meaningless
};

PolarRoot to_polar(Complex root);
Complex from_polar(const PolarRoot& p);
Complex from_polar(double magnitude, double angle);

enum class RegionClass { AsymptoticallyStable, Unstable, HarmonicBoundary, NonOscillatingDecay };

std::string_view to_string(RegionClass c);

// Region of the (σ, ω) plane a root falls in. A root at the origin (within
// tol) is neither decaying nor oscillating and reports Unstable.
RegionClass classify(Complex root, double tol = kDefaultBoundaryTolerance);

// Decaying classes: AsymptoticallyStable and NonOscillatingDecay.
inline bool is_decaying(RegionClass c) {
    return c == RegionClass::AsymptoticallyStable || c == RegionClass::NonOscillatingDecay;
}

}  // namespace harmosc
