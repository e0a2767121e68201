#include "harmosc/lti.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "harmosc/error.hpp"

namespace harmosc {

StateSpaceModel canonical_state_space(const Polynomial& poly) {
    const int n = poly.degree();
    const auto c = poly.coeffs();
    const double lead = poly.leading();

    StateSpaceModel m;
    m.a = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) m.a(0, j) = -c[static_cast<std::size_t>(n - 1 - j)] / lead;
    if (n > 1) m.a.diagonal(-1).setOnes();
    m.b = Eigen::VectorXd::Zero(n);
    m.b(0) = 1.0 / lead;
    m.c = Eigen::RowVectorXd::Zero(n);
    m.c(n - 1) = 1.0;
    return m;
}

Eigen::VectorXcd eigenvalues(const StateSpaceModel& model) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(model.a, false);
    return solver.eigenvalues();
}

Complex transfer_eval(const Polynomial& poly, Complex s) {
    const Complex delta = evaluate(poly, s);
    if (std::abs(delta) <= 1e-12 * evaluation_scale(poly, s)) {
        throw Error(ErrorCode::PoleProximity, "transfer function evaluated at a pole");
    }
    return 1.0 / delta;
}

Complex transfer_eval(const StateSpaceModel& model, Complex s) {
    const Eigen::Index n = model.a.rows();
    Eigen::MatrixXcd resolvent = s * Eigen::MatrixXcd::Identity(n, n) - model.a.cast<Complex>();
    const Eigen::VectorXcd x = resolvent.partialPivLu().solve(model.b.cast<Complex>());
    return (model.c.cast<Complex>() * x)(0) + model.d;
}

std::size_t grid_size(double t_end, double dt) {
    if (!(t_end > 0.0) || !(dt > 0.0) || !std::isfinite(t_end) || !std::isfinite(dt)) {
        throw Error(ErrorCode::InvalidArgument, "t_end and dt must be positive");
    }
    return static_cast<std::size_t>(std::floor(t_end / dt + 1e-9)) + 1;
}

namespace {

std::size_t grid_index(double t, double dt) { return static_cast<std::size_t>(std::llround(t / dt)); }

template <typename Event, typename TimeOf>
void check_events(const std::vector<Event>& events, TimeOf time_of, double t_end) {
    double previous = -1.0;
    bool first = true;
    for (const Event& e : events) {
        const double t = time_of(e);
        if (!std::isfinite(t) || t < 0.0) throw Error(ErrorCode::InvalidArgument, "event times must be non-negative");
        if (!first && !(t > previous)) {
            throw Error(ErrorCode::InvalidArgument, "event times must be strictly increasing");
        }
        if (t > t_end) {
            throw Error(ErrorCode::EventBeyondHorizon,
                        "event at t=" + std::to_string(t) + " is beyond t_end=" + std::to_string(t_end));
        }
        previous = t;
        first = false;
    }
}

}  // namespace

DrivenInput make_input(const InputSpec& spec, double t_end, double dt) {
    const std::size_t n = grid_size(t_end, dt);
    DrivenInput out{Signal{0.0, dt, std::vector<double>(n, 0.0)}, {}};

    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ImpulseTrain>) {
                check_events(s.impulses, [](const Impulse& i) { return i.time; }, t_end);
                for (const Impulse& i : s.impulses) {
                    if (!std::isfinite(i.area)) throw Error(ErrorCode::InvalidArgument, "impulse area must be finite");
                }
                out.events = s.impulses;
            } else if constexpr (std::is_same_v<T, StepSchedule>) {
                check_events(s.steps, [](const Step& st) { return st.start; }, t_end);
                for (std::size_t k = 0; k < s.steps.size(); ++k) {
                    if (!std::isfinite(s.steps[k].level)) throw Error(ErrorCode::InvalidArgument, "step level must be finite");
                    const std::size_t begin = std::min(grid_index(s.steps[k].start, dt), n);
                    const std::size_t end =
                        k + 1 < s.steps.size() ? std::min(grid_index(s.steps[k + 1].start, dt), n) : n;
                    for (std::size_t i = begin; i < end; ++i) out.u.samples[i] = s.steps[k].level;
                }
            }
        },
        spec);
    return out;
}

double max_resolution_step(const StateSpaceModel& model) {
    const double omega_max = eigenvalues(model).cwiseAbs().maxCoeff();
    if (omega_max == 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 * std::numbers::pi / (omega_max * 40.0);
}

Signal simulate(const StateSpaceModel& model, const DrivenInput& input, double t_end, double dt,
                std::span<const double> x0) {
    const std::size_t steps = grid_size(t_end, dt);
    const Eigen::Index n = model.a.rows();
    if (model.b.size() != n || model.c.size() != n) {
        throw Error(ErrorCode::InvalidArgument, "inconsistent state-space dimensions");
    }
    const double limit = max_resolution_step(model);
    if (dt > limit * (1.0 + 1e-12)) {
        throw Error(ErrorCode::ResolutionViolation,
                    "dt=" + std::to_string(dt) + " exceeds the resolution limit " + std::to_string(limit));
    }
    if (!input.u.samples.empty()) {
        if (std::abs(input.u.dt - dt) > 1e-12 * dt || input.u.samples.size() < steps) {
            throw Error(ErrorCode::InvalidArgument, "input samples do not cover the simulation grid");
        }
    }

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    if (!x0.empty()) {
        if (static_cast<Eigen::Index>(x0.size()) != n) throw Error(ErrorCode::InvalidArgument, "x0 has wrong dimension");
        for (Eigen::Index i = 0; i < n; ++i) x(i) = x0[static_cast<std::size_t>(i)];
    }

    // Impulse jumps indexed by grid point.
    std::vector<double> jumps(steps, 0.0);
    for (const Impulse& e : input.events) {
        const std::size_t k = grid_index(e.time, dt);
        if (e.time < 0.0 || k >= steps) {
            throw Error(ErrorCode::EventBeyondHorizon, "impulse at t=" + std::to_string(e.time) + " is off the grid");
        }
        jumps[k] += e.area;
    }

    Signal y{0.0, dt, std::vector<double>(steps)};
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n);
    for (std::size_t k = 0; k < steps; ++k) {
        if (jumps[k] != 0.0) x += model.b * jumps[k];
        y.samples[k] = model.c.dot(x) + model.d * (input.u.samples.empty() ? 0.0 : input.u.samples[k]);
        if (k + 1 == steps) break;

        const double u = input.u.samples.empty() ? 0.0 : input.u.samples[k];
        const Eigen::VectorXd bu = model.b * u;
        k1.noalias() = model.a * x + bu;
        k2.noalias() = model.a * (x + 0.5 * dt * k1) + bu;
        k3.noalias() = model.a * (x + 0.5 * dt * k2) + bu;
        k4.noalias() = model.a * (x + dt * k3) + bu;
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!x.allFinite()) {
            throw Error(ErrorCode::NonFiniteState,
                        "state overflowed at t=" + std::to_string(static_cast<double>(k + 1) * dt));
        }
    }
    return y;
}

}  // namespace harmosc
