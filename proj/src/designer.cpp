#include "harmosc/designer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "harmosc/error.hpp"

namespace harmosc {

namespace {

// cos(πi/2) and sin(πi/2) from i mod 4, so structural zeros stay exact.
int quarter_cos(int i) {
    switch (i % 4) {
        case 0: return 1;
        case 2: return -1;
        default: return 0;
    }
}

int quarter_sin(int i) {
    switch (i % 4) {
        case 1: return 1;
        case 3: return -1;
        default: return 0;
    }
}

std::vector<double> powers(int order, double base) {
    std::vector<double> p(static_cast<std::size_t>(order) + 1);
    double acc = 1.0;
    for (auto& v : p) {
        v = acc;
        acc *= base;
    }
    return p;
}

constexpr double kRankTolerance = 1e-10;

}  // namespace

void validate(const DesignSpec& spec) {
    if (spec.order < 2) throw Error(ErrorCode::InvalidArgument, "order must be >= 2");
    if (!std::isfinite(spec.omega_k) || !(spec.omega_k > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "omega_k must be a positive finite number");
    }
    for (double s : spec.decays) {
        if (!std::isfinite(s) || !(s > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "decay magnitudes must be positive finite numbers");
        }
    }
    if (spec.pinned.empty()) {
        throw Error(ErrorCode::Underconstrained, "at least one coefficient must be pinned to fix the scale");
    }
    for (const auto& [index, value] : spec.pinned) {
        if (index < 0 || index > spec.order) {
            throw Error(ErrorCode::InvalidArgument,
                        "pinned index " + std::to_string(index) + " outside [0, order]");
        }
        if (!std::isfinite(value)) throw Error(ErrorCode::InvalidArgument, "pinned value must be finite");
    }
    const std::size_t rows = spec.decays.size() + spec.pinned.size() + 2;
    const std::size_t unknowns = static_cast<std::size_t>(spec.order) + 1;
    if (rows > unknowns) {
        throw Error(ErrorCode::Overconstrained, std::to_string(rows) + " constraints for " +
                                                    std::to_string(unknowns) + " coefficients");
    }
    if (rows < unknowns) {
        throw Error(ErrorCode::Underconstrained, std::to_string(rows) + " constraints for " +
                                                     std::to_string(unknowns) + " coefficients");
    }
    std::set<double> distinct(spec.decays.begin(), spec.decays.end());
    if (distinct.size() != spec.decays.size()) {
        throw Error(ErrorCode::SingularSystem, "decay magnitudes must be pairwise distinct");
    }
}

OscillationRows oscillation_rows(int order, double omega_k) {
    if (order < 1) throw Error(ErrorCode::InvalidArgument, "order must be >= 1");
    const auto p = powers(order, omega_k);
    OscillationRows rows{std::vector<double>(p.size()), std::vector<double>(p.size())};
    for (int i = 0; i <= order; ++i) {
        const auto k = static_cast<std::size_t>(i);
        rows.real[k] = quarter_cos(i) * p[k];
        rows.imag[k] = quarter_sin(i) * p[k];
    }
    return rows;
}

std::vector<double> decay_row(int order, double sigma) {
    if (order < 1) throw Error(ErrorCode::InvalidArgument, "order must be >= 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorCode::InvalidArgument, "decay magnitude must be positive");
    }
    return powers(order, -sigma);
}

Polynomial design(const DesignSpec& spec) {
    validate(spec);
    const int n = spec.order;
    const Eigen::Index size = n + 1;

    // Unknowns are rescaled as αᵢ = βᵢ / sⁱ with s the geometric mean of the
    // requested root magnitudes, so row entries become (z/s)ⁱ.
    double log_scale = std::log(spec.omega_k);
    for (double s : spec.decays) log_scale += std::log(s);
    const double s = std::exp(log_scale / static_cast<double>(spec.decays.size() + 1));
    const auto col_scale = powers(n, 1.0 / s);

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
    Eigen::Index row = 0;
    auto put = [&](const std::vector<double>& r) {
        for (Eigen::Index i = 0; i < size; ++i) m(row, i) = r[static_cast<std::size_t>(i)] * col_scale[static_cast<std::size_t>(i)];
        ++row;
    };
    const OscillationRows osc = oscillation_rows(n, spec.omega_k);
    put(osc.real);
    put(osc.imag);
    for (double sigma : spec.decays) put(decay_row(n, sigma));
    for (const auto& [index, value] : spec.pinned) {
        m(row, index) = col_scale[static_cast<std::size_t>(index)];
        rhs(row) = value;
        ++row;
    }

    for (Eigen::Index r = 0; r < size; ++r) {
        const double peak = m.row(r).cwiseAbs().maxCoeff();
        if (peak == 0.0) throw Error(ErrorCode::SingularSystem, "constraint row is identically zero");
        m.row(r) /= peak;
        rhs(r) /= peak;
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(kRankTolerance);
    if (lu.rank() < size) {
        throw Error(ErrorCode::SingularSystem, "design constraints are linearly dependent (rank " +
                                                   std::to_string(lu.rank()) + " of " +
                                                   std::to_string(size) + ")");
    }
    Eigen::VectorXd beta = lu.solve(rhs);
    beta += lu.solve(rhs - m * beta);

    std::vector<double> coeffs(static_cast<std::size_t>(size));
    for (Eigen::Index i = 0; i < size; ++i) coeffs[static_cast<std::size_t>(i)] = beta(i) * col_scale[static_cast<std::size_t>(i)];
    for (const auto& [index, value] : spec.pinned) coeffs[static_cast<std::size_t>(index)] = value;
    return Polynomial(std::move(coeffs));
}

std::pair<double, double> solve_two_free(int order, double omega_k, const std::map<int, double>& known,
                                         int even_index, int odd_index) {
    if (order < 1 || !(omega_k > 0.0)) throw Error(ErrorCode::InvalidArgument, "need order >= 1 and omega_k > 0");
    if (even_index < 0 || even_index > order || odd_index < 0 || odd_index > order || even_index == odd_index) {
        throw Error(ErrorCode::InvalidArgument, "free indices must be distinct and within [0, order]");
    }
    for (int i = 0; i <= order; ++i) {
        const bool is_free = i == even_index || i == odd_index;
        if (is_free == (known.count(i) != 0)) {
            throw Error(ErrorCode::InvalidArgument,
                        "known coefficients must cover every index except the two free ones");
        }
    }
    if (known.size() != static_cast<std::size_t>(order) - 1) {
        throw Error(ErrorCode::InvalidArgument, "unexpected coefficient index in known set");
    }

    const OscillationRows osc = oscillation_rows(order, omega_k);
    const double even_weight = osc.real[static_cast<std::size_t>(even_index)];
    const double odd_weight = osc.imag[static_cast<std::size_t>(odd_index)];
    if (even_weight == 0.0 || odd_weight == 0.0) {
        throw Error(ErrorCode::ZeroPivot, "free coefficient has zero weight in its oscillation row");
    }
    // The even unknown has zero weight in the imaginary row and vice versa.
    double real_sum = 0.0;
    double imag_sum = 0.0;
    for (const auto& [i, value] : known) {
        real_sum += value * osc.real[static_cast<std::size_t>(i)];
        imag_sum += value * osc.imag[static_cast<std::size_t>(i)];
    }
    return {-real_sum / even_weight, -imag_sum / odd_weight};
}

DesignReport verify_design(const Polynomial& poly, const DesignSpec& spec, double tol) {
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    validate(spec);
    if (poly.degree() != spec.order) {
        throw Error(ErrorCode::InvalidArgument, "polynomial degree does not match the spec order");
    }

    DesignReport report{poly, roots(poly), {}, {}, {}, false};
    const Complex jw(0.0, spec.omega_k);
    report.oscillation_residual = evaluate(poly, jw);
    bool residuals_ok = std::abs(report.oscillation_residual) <= tol * evaluation_scale(poly, jw);
    for (double sigma : spec.decays) {
        const double r = evaluate(poly, -sigma);
        report.decay_residuals.push_back(r);
        residuals_ok = residuals_ok && std::abs(r) <= tol * evaluation_scale(poly, Complex(-sigma));
    }

    int boundary_at_target = 0;
    bool others_decay = true;
    for (const Complex& z : report.roots) {
        const RegionClass c = classify(z, tol * std::max(1.0, std::abs(z)));
        report.classes.push_back(c);
        if (c == RegionClass::HarmonicBoundary &&
            std::abs(std::abs(z.imag()) - spec.omega_k) <= 1e-6 * spec.omega_k) {
            ++boundary_at_target;
        } else if (!is_decaying(c)) {
            others_decay = false;
        }
    }
    report.verdict = residuals_ok && others_decay && boundary_at_target == 2;
    return report;
}

}  // namespace harmosc
