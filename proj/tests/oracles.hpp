#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// library, so each oracle stays independent of the code path it checks.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

// Ascending-power product of real factors.
inline std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

// (λ² + ω²) Π (λ + σ_p), rescaled so the constant term equals `alpha0`.
inline std::vector<double> oscillator_expansion(double omega, const std::vector<double>& decays, double alpha0 = 1.0) {
    std::vector<double> p{omega * omega, 0.0, 1.0};
    for (double s : decays) p = multiply(p, {s, 1.0});
    const double k = alpha0 / p[0];
    for (double& c : p) c *= k;
    return p;
}

inline Complex horner(const std::vector<double>& c, Complex z) {
    Complex acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

inline std::vector<double> derivative(const std::vector<double>& c) {
    std::vector<double> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
    return d;
}

// Amplitude of the persistent sinusoid in the impulse response of 1/Δ:
// twice the modulus of the residue 1/Δ'(jω).
inline double residue_amplitude(const std::vector<double>& coeffs, double omega) {
    return 2.0 / std::abs(horner(derivative(coeffs), Complex(0.0, omega)));
}

// Roots of a·λ² + b·λ + c with a negative discriminant.
inline std::pair<Complex, Complex> complex_quadratic_roots(double a, double b, double c) {
    const double re = -b / (2.0 * a);
    const double im = std::sqrt(4.0 * a * c - b * b) / (2.0 * a);
    return {Complex(re, im), Complex(re, -im)};
}

// O(N²) DFT.
inline std::vector<Complex> dft(const std::vector<Complex>& x) {
    const std::size_t n = x.size();
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * i) % n) / static_cast<double>(n);
            acc += x[i] * Complex(std::cos(angle), std::sin(angle));
        }
        out[k] = acc;
    }
    return out;
}

// Pairwise-distinct decay magnitudes in [lo, hi] with at least `gap` relative separation.
inline std::vector<double> distinct_decays(std::mt19937_64& rng, std::size_t count, double lo, double hi, double gap = 0.05) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> out;
    while (out.size() < count) {
        const double candidate = u(rng);
        bool ok = true;
        for (double d : out) ok = ok && std::abs(candidate - d) > gap * std::max(candidate, d);
        if (ok) out.push_back(candidate);
    }
    return out;
}

}  // namespace oracle
