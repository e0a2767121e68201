#pragma once

#include <Eigen/Dense>

#include <span>
#include <variant>
#include <vector>

#include "harmosc/polynomial.hpp"
#include "harmosc/signal.hpp"

namespace harmosc {

/**
 * @brief SISO state-space model x' = Ax + Bu, y = Cx + Du.
 *
 * Built by canonical_state_space() in controller canonical form: the first row
 * of A holds −(α_{n−1} … α₀)/α_n, the subdiagonal is ones, B = e₁/α_n and
 * C = e_n, so the transfer function is exactly 1/Δ(s).
 */
struct StateSpaceModel {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::RowVectorXd c;
    double d = 0.0;

    int order() const noexcept { return static_cast<int>(a.rows()); }
};

StateSpaceModel canonical_state_space(const Polynomial& poly);

Eigen::VectorXcd eigenvalues(const StateSpaceModel& model);

// 1/Δ(s); throws PoleProximity when |Δ(s)| is below 1e-12 of its evaluation scale.
Complex transfer_eval(const Polynomial& poly, Complex s);
// C(sI − A)⁻¹B + D through a complex LU solve.
Complex transfer_eval(const StateSpaceModel& model, Complex s);

struct Impulse {
    double time = 0.0;  // s
    double area = 0.0;  // output-units·s
};

struct Step {
    double start = 0.0;  // s
    double level = 0.0;  // output-units
};

struct ImpulseTrain {
    std::vector<Impulse> impulses;
};

// Piecewise-constant input; each level holds on [start, next start). Zero before the first.
struct StepSchedule {
    std::vector<Step> steps;
};

struct ZeroInput {};

using InputSpec = std::variant<ImpulseTrain, StepSchedule, ZeroInput>;

struct DrivenInput {
    Signal u;                     // zero-order-hold samples on the simulation grid
    std::vector<Impulse> events;  // applied as state jumps, never sampled
};

// Number of grid samples covering [0, t_end] with spacing dt.
std::size_t grid_size(double t_end, double dt);

DrivenInput make_input(const InputSpec& spec, double t_end, double dt);

// Largest stable step for the fixed-step integrator: 2π / (40·max|eig(A)|).
double max_resolution_step(const StateSpaceModel& model);

/**
 * Fixed-step classical RK4 with zero-order-hold input. Impulse events snap to
 * the nearest grid point and act as x ← x + B·area before the output there is
 * recorded. Empty x0 means the zero state.
 */
Signal simulate(const StateSpaceModel& model, const DrivenInput& input, double t_end, double dt,
                std::span<const double> x0 = {});

}  // namespace harmosc
