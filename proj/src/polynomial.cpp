#include "harmosc/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "harmosc/error.hpp"

namespace harmosc {

Polynomial::Polynomial(std::vector<double> coeffs, double zero_tol) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "polynomial needs degree >= 1");
    }
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "non-finite polynomial coefficient");
    }
    if (!(std::abs(coeffs_.back()) > zero_tol * max_abs_coeff())) {
        throw Error(ErrorCode::DegenerateLeadingCoefficient,
                    "leading coefficient " + std::to_string(coeffs_.back()) + " is zero within tolerance");
    }
}

double Polynomial::max_abs_coeff() const noexcept {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

double Polynomial::norm() const noexcept {
    double s = 0.0;
    for (double c : coeffs_) s += c * c;
    return std::sqrt(s);
}

Polynomial Polynomial::scaled(double c) const {
    std::vector<double> out(coeffs_);
    for (double& a : out) a *= c;
    return Polynomial(std::move(out));
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots, double leading) {
    std::vector<Complex> acc{Complex(leading)};
    for (const Complex& r : roots) {
        std::vector<Complex> next(acc.size() + 1, Complex(0.0));
        for (std::size_t i = 0; i < acc.size(); ++i) {
            next[i + 1] += acc[i];
            next[i] -= r * acc[i];
        }
        acc = std::move(next);
    }
    std::vector<double> coeffs(acc.size());
    std::transform(acc.begin(), acc.end(), coeffs.begin(), [](Complex c) { return c.real(); });
    return Polynomial(std::move(coeffs));
}

Complex evaluate(const Polynomial& poly, Complex lambda) {
    const auto c = poly.coeffs();
    Complex acc(0.0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * lambda + *it;
    return acc;
}

double evaluate(const Polynomial& poly, double x) {
    const auto c = poly.coeffs();
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double evaluation_scale(const Polynomial& poly, Complex lambda) {
    const auto c = poly.coeffs();
    const double r = std::abs(lambda);
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
}

Polynomial derivative(const Polynomial& poly) {
    const auto c = poly.coeffs();
    if (c.size() == 2) {
        throw Error(ErrorCode::InvalidArgument, "derivative of a linear polynomial is constant");
    }
    std::vector<double> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
    return Polynomial(std::move(d));
}

namespace {

// Parlett-Reinsch balancing with power-of-two scalings (exact in floating point).
void balance(Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    constexpr double gamma = 0.95;
    bool changed = true;
    while (changed) {
        changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            double row = 0.0;
            double col = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                row += std::abs(m(i, j));
                col += std::abs(m(j, i));
            }
            if (row == 0.0 || col == 0.0) continue;
            int exponent = 0;
            std::frexp(row / col, &exponent);
            exponent /= 2;
            if (exponent == 0) continue;
            const double new_col = std::ldexp(col, exponent);
            const double new_row = std::ldexp(row, -exponent);
            if (new_col + new_row < gamma * (col + row)) {
                changed = true;
                m.row(i) *= std::ldexp(1.0, -exponent);
                m.col(i) *= std::ldexp(1.0, exponent);
            }
        }
    }
}

template <typename T>
T polish(const Polynomial& poly, const Polynomial& deriv, T z) {
    auto residual = [&](T x) { return std::abs(evaluate(poly, x)); };
    double best = residual(z);
    for (int iter = 0; iter < 8 && best > 0.0; ++iter) {
        const T slope = evaluate(deriv, z);
        if (std::abs(slope) == 0.0) break;
        const T candidate = z - evaluate(poly, z) / slope;
        const double r = residual(candidate);
        if (!(r < best)) break;
        z = candidate;
        best = r;
    }
    return z;
}

}  // namespace

RootSet roots(const Polynomial& poly) {
    const int n = poly.degree();
    const auto c = poly.coeffs();
    const double lead = poly.leading();

    RootSet out;
    out.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        out.emplace_back(-c[0] / c[1], 0.0);
        return out;
    }

    // Companion matrix with the normalized coefficients in the first row, the
    // same layout as the controller canonical realization.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) companion(0, j) = -c[static_cast<std::size_t>(n - 1 - j)] / lead;
    companion.diagonal(-1).setOnes();
    balance(companion);

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::SingularSystem, "companion eigenvalue iteration did not converge");
    }

    const Polynomial deriv = derivative(poly);
    const Eigen::VectorXcd& eig = solver.eigenvalues();
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        const Complex z = eig(i);
        if (z.imag() == 0.0) {
            out.emplace_back(polish(poly, deriv, z.real()), 0.0);
        } else if (z.imag() > 0.0) {
            const Complex p = polish(poly, deriv, z);
            out.push_back(p);
            out.push_back(std::conj(p));
        }
    }
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return out;
}

PolarRoot to_polar(Complex root) {
    PolarRoot p;
    p.magnitude = std::abs(root);
    if (p.magnitude == 0.0) {
        p.degenerate = true;
        return p;
    }
    p.angle = std::atan2(root.imag(), root.real());
    if (p.angle <= -std::numbers::pi) p.angle = std::numbers::pi;
    return p;
}

Complex from_polar(double magnitude, double angle) {
    return {magnitude * std::cos(angle), magnitude * std::sin(angle)};
}

Complex from_polar(const PolarRoot& p) { return from_polar(p.magnitude, p.angle); }

std::string_view to_string(RegionClass c) {
    switch (c) {
        case RegionClass::AsymptoticallyStable: return "AsymptoticallyStable";
        case RegionClass::Unstable: return "Unstable";
        case RegionClass::HarmonicBoundary: return "HarmonicBoundary";
        case RegionClass::NonOscillatingDecay: return "NonOscillatingDecay";
    }
    return "Unknown";
}

RegionClass classify(Complex root, double tol) {
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "classification tolerance must be positive");
    const double sigma = root.real();
    const double omega = std::abs(root.imag());
    if (sigma < -tol) {
        return omega <= tol ? RegionClass::NonOscillatingDecay : RegionClass::AsymptoticallyStable;
    }
    if (sigma <= tol && omega > tol) return RegionClass::HarmonicBoundary;
    return RegionClass::Unstable;
}

}  // namespace harmosc
