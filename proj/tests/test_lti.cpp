#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "harmosc/designer.hpp"
#include "harmosc/error.hpp"
#include "harmosc/lti.hpp"
#include "oracles.hpp"

using namespace harmosc;

namespace {

const std::vector<double> kOscW2{1.0, 0.5, 4.25, 0.125, 1.0};
const std::vector<double> kCleanW1Printed{1.0, 0.3020, 1.0204, 0.3020, 0.0204};

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected harmosc::Error");
    return ErrorCode::InvalidArgument;
}

double max_abs_after(const Signal& s, double t_from) {
    double m = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s.time(k) >= t_from) m = std::max(m, std::abs(s.samples[k]));
    }
    return m;
}

Signal impulse_response(const std::vector<double>& coeffs, double area, double t_end, double dt) {
    const StateSpaceModel m = canonical_state_space(Polynomial(coeffs));
    return simulate(m, make_input(ImpulseTrain{{{0.0, area}}}, t_end, dt), t_end, dt);
}

// Σ e^{λt}/Δ'(λ) over the simple roots of the fourth-order oscillator.
double exact_impulse_w2(double t) {
    const auto [q1, q2] = oracle::complex_quadratic_roots(1.0, 0.125, 0.25);
    const std::vector<oracle::Complex> poles{{0.0, 2.0}, {0.0, -2.0}, q1, q2};
    const auto d = oracle::derivative(kOscW2);
    oracle::Complex acc = 0.0;
    for (const auto& p : poles) acc += std::exp(p * t) / oracle::horner(d, p);
    return acc.real();
}

}  // namespace

TEST_CASE("canonical state space") {
    SUBCASE("fourth-order oscillator") {
        const StateSpaceModel m = canonical_state_space(Polynomial(kOscW2));
        REQUIRE(m.order() == 4);
        CHECK(m.a(0, 0) == -0.125);
        CHECK(m.a(0, 1) == -4.25);
        CHECK(m.a(0, 2) == -0.5);
        CHECK(m.a(0, 3) == -1.0);
        for (int i = 1; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) CHECK(m.a(i, j) == (j == i - 1 ? 1.0 : 0.0));
        }
        CHECK(m.b(0) == 1.0);
        CHECK(m.c(3) == 1.0);
        CHECK(m.d == 0.0);
    }
    SUBCASE("first order") {
        const StateSpaceModel m = canonical_state_space(Polynomial({1.0, 1.0}));
        CHECK(m.a(0, 0) == -1.0);
        CHECK(m.b(0) == 1.0);
        CHECK(m.c(0) == 1.0);
    }
    SUBCASE("small leading coefficient scales the companion row") {
        const StateSpaceModel m = canonical_state_space(Polynomial(kCleanW1Printed));
        CHECK(m.a(0, 0) == doctest::Approx(-14.80).epsilon(1e-3));
        CHECK(m.a(0, 1) == doctest::Approx(-50.02).epsilon(1e-3));
        CHECK(m.a(0, 2) == doctest::Approx(-14.80).epsilon(1e-3));
        CHECK(m.a(0, 3) == doctest::Approx(-49.02).epsilon(1e-3));
        CHECK(m.b(0) == doctest::Approx(1.0 / 0.0204));
        const StateSpaceModel exact = canonical_state_space(design({4, 1.0, {5.0, 9.8}, {{0, 1.0}}}));
        CHECK(exact.a(0, 0) == doctest::Approx(-14.8).epsilon(1e-12));
        CHECK(exact.a(0, 1) == doctest::Approx(-50.0).epsilon(1e-12));
        CHECK(exact.a(0, 2) == doctest::Approx(-14.8).epsilon(1e-12));
        CHECK(exact.a(0, 3) == doctest::Approx(-49.0).epsilon(1e-12));
    }
}

TEST_CASE("eigenvalues and transfer function agree with the polynomial") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> order(3, 8);
    std::uniform_real_distribution<double> omega(0.1, 10.0);
    std::uniform_real_distribution<double> probe(-5.0, 5.0);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = order(rng);
        const double w = omega(rng);
        const auto decays = oracle::distinct_decays(rng, static_cast<std::size_t>(n - 2), 0.5, 20.0);
        const Polynomial p = design({n, w, decays, {{0, 1.0}}});
        const StateSpaceModel m = canonical_state_space(p);

        const Eigen::VectorXcd eig = eigenvalues(m);
        for (Eigen::Index i = 0; i < eig.size(); ++i) {
            CHECK(std::abs(evaluate(p, eig(i))) <= 1e-8 * evaluation_scale(p, eig(i)));
        }

        for (int k = 0; k < 20; ++k) {
            const Complex s(probe(rng), probe(rng));
            const Complex h = transfer_eval(p, s);
            CHECK(std::abs(transfer_eval(m, s) - h) <= 1e-9 * std::abs(h));
        }
    }
}

TEST_CASE("transfer_eval") {
    const Polynomial osc(kOscW2);
    const Polynomial clean = design({4, 1.0, {5.0, 9.8}, {{0, 1.0}}});
    CHECK(transfer_eval(osc, Complex(0.0)) == Complex(1.0));
    CHECK(std::abs(transfer_eval(clean, Complex(0.0)) - 1.0) < 1e-15);
    CHECK(std::abs(transfer_eval(canonical_state_space(osc), Complex(0.0)) - 1.0) < 1e-12);
    CHECK(code_of([&] { transfer_eval(osc, Complex(0.0, 2.0)); }) == ErrorCode::PoleProximity);
}

TEST_CASE("make_input") {
    SUBCASE("impulse train keeps its events off the sampled input") {
        const DrivenInput in = make_input(ImpulseTrain{{{0.0, 0.5}, {100.0, 1.0}, {150.0, 1.2}}}, 200.0, 0.01);
        REQUIRE(in.events.size() == 3);
        CHECK(in.events[1].time == 100.0);
        CHECK(in.events[2].area == 1.2);
        CHECK(in.u.size() == 20001);
        CHECK(std::all_of(in.u.samples.begin(), in.u.samples.end(), [](double v) { return v == 0.0; }));
    }
    SUBCASE("step schedule holds on left-closed intervals") {
        const DrivenInput in = make_input(StepSchedule{{{0.0, 0.5}, {50.0, 1.0}, {100.0, 2.0}}}, 200.0, 0.1);
        CHECK(in.u.size() == 2001);
        CHECK(in.u.samples[0] == 0.5);
        CHECK(in.u.samples[499] == 0.5);
        CHECK(in.u.samples[500] == 1.0);
        CHECK(in.u.samples[750] == 1.0);
        CHECK(in.u.samples[999] == 1.0);
        CHECK(in.u.samples[1000] == 2.0);
        CHECK(in.u.samples[2000] == 2.0);
        CHECK(in.events.empty());
    }
    SUBCASE("late first step leaves zero before it") {
        const DrivenInput in = make_input(StepSchedule{{{1.0, 3.0}}}, 2.0, 0.5);
        CHECK(in.u.samples == std::vector<double>{0.0, 0.0, 3.0, 3.0, 3.0});
    }
    SUBCASE("zero input") {
        const DrivenInput in = make_input(ZeroInput{}, 10.0, 0.5);
        CHECK(in.u.size() == 21);
        CHECK(in.events.empty());
    }
    SUBCASE("errors") {
        CHECK(code_of([] { make_input(ImpulseTrain{{{250.0, 1.0}}}, 200.0, 0.01); }) == ErrorCode::EventBeyondHorizon);
        CHECK(code_of([] { make_input(StepSchedule{{{0.0, 1.0}, {201.0, 1.0}}}, 200.0, 0.01); }) ==
              ErrorCode::EventBeyondHorizon);
        CHECK(code_of([] { make_input(ImpulseTrain{{{5.0, 1.0}, {5.0, 1.0}}}, 10.0, 0.01); }) ==
              ErrorCode::InvalidArgument);
        CHECK(code_of([] { make_input(StepSchedule{{{-1.0, 1.0}}}, 10.0, 0.01); }) == ErrorCode::InvalidArgument);
        CHECK(code_of([] { make_input(ZeroInput{}, 10.0, 0.0); }) == ErrorCode::InvalidArgument);
        CHECK(code_of([] { make_input(ZeroInput{}, -1.0, 0.1); }) == ErrorCode::InvalidArgument);
    }
}

TEST_CASE("impulse response of the fourth-order oscillator") {
    const Signal y = impulse_response(kOscW2, 1.0, 200.0, 0.01);
    CHECK(y.size() == 20001);
    CHECK(y.samples[0] == 0.0);
    const double expected = 2.0 / std::sqrt(226.0);
    CHECK(max_abs_after(y, 150.0) == doctest::Approx(0.133).epsilon(0.02));
    CHECK(max_abs_after(y, 150.0) == doctest::Approx(expected).epsilon(1e-3));
    CHECK(max_abs_after(y, 150.0) == doctest::Approx(oracle::residue_amplitude(kOscW2, 2.0)).epsilon(1e-3));

    const Signal y5 = impulse_response(kOscW2, 5.0, 200.0, 0.01);
    CHECK(max_abs_after(y5, 150.0) == doctest::Approx(0.665).epsilon(0.02));
    for (std::size_t k = 0; k < y.size(); ++k) CHECK(y5.samples[k] == doctest::Approx(5.0 * y.samples[k]).epsilon(1e-12));
}

TEST_CASE("zero input keeps the zero state") {
    const StateSpaceModel m = canonical_state_space(Polynomial(kOscW2));
    const Signal y = simulate(m, make_input(ZeroInput{}, 50.0, 0.01), 50.0, 0.01);
    CHECK(std::all_of(y.samples.begin(), y.samples.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("simulation errors") {
    const StateSpaceModel m = canonical_state_space(Polynomial(kOscW2));
    const double limit = max_resolution_step(m);
    CHECK(limit == doctest::Approx(2.0 * std::numbers::pi / 80.0).epsilon(1e-9));
    CHECK(code_of([&] { simulate(m, make_input(ZeroInput{}, 10.0, 1.0), 10.0, 1.0); }) ==
          ErrorCode::ResolutionViolation);
    CHECK_NOTHROW(simulate(m, make_input(ZeroInput{}, 10.0, limit), 10.0, limit));

    // λ − 50 grows like e^{50t}
    const StateSpaceModel unstable = canonical_state_space(Polynomial({-50.0, 1.0}));
    CHECK(code_of([&] { simulate(unstable, make_input(ImpulseTrain{{{0.0, 1.0}}}, 100.0, 0.003), 100.0, 0.003); }) ==
          ErrorCode::NonFiniteState);

    const std::vector<double> bad_x0{1.0, 2.0};
    CHECK(code_of([&] { simulate(m, make_input(ZeroInput{}, 10.0, 0.01), 10.0, 0.01, bad_x0); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([&] { simulate(m, make_input(ZeroInput{}, 10.0, 0.02), 10.0, 0.01); }) ==
          ErrorCode::InvalidArgument);
}

TEST_CASE("superposition and linearity") {
    const StateSpaceModel m = canonical_state_space(design({4, 1.0, {5.0, 9.8}, {{0, 1.0}}}));
    const double t_end = 60.0;
    const double dt = 0.01;
    const auto run = [&](const InputSpec& in) { return simulate(m, make_input(in, t_end, dt), t_end, dt); };

    const Signal a = run(ImpulseTrain{{{0.0, 0.5}, {20.0, 1.0}}});
    const Signal b = run(StepSchedule{{{0.0, 0.7}, {30.0, -0.3}}});
    DrivenInput both = make_input(StepSchedule{{{0.0, 0.7}, {30.0, -0.3}}}, t_end, dt);
    both.events = {{0.0, 0.5}, {20.0, 1.0}};
    const Signal ab = simulate(m, both, t_end, dt);

    const Signal scaled = run(ImpulseTrain{{{0.0, -1.5}, {20.0, -3.0}}});

    double peak = 0.0;
    for (double v : ab.samples) peak = std::max(peak, std::abs(v));
    for (std::size_t k = 0; k < ab.size(); ++k) {
        CHECK(std::abs(ab.samples[k] - (a.samples[k] + b.samples[k])) <= 1e-12 * peak);
        CHECK(std::abs(scaled.samples[k] + 3.0 * a.samples[k]) <= 1e-12 * peak);
    }
}

TEST_CASE("RK4 converges at fourth order") {
    const auto error_at = [](double dt) {
        const Signal y = impulse_response(kOscW2, 1.0, 20.0, dt);
        double worst = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) worst = std::max(worst, std::abs(y.samples[k] - exact_impulse_w2(y.time(k))));
        return worst;
    };
    const double e1 = error_at(0.04);
    const double e2 = error_at(0.02);
    CHECK(e1 / e2 >= 12.0);
    CHECK(e2 < 1e-6);
}

TEST_CASE("steady amplitude matches the residue") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> order(3, 6);
    std::uniform_real_distribution<double> omega(0.5, 5.0);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = order(rng);
        const double w = omega(rng);
        const auto decays = oracle::distinct_decays(rng, static_cast<std::size_t>(n - 2), 0.5, 20.0);
        const Polynomial p = design({n, w, decays, {{0, 1.0}}});
        const StateSpaceModel m = canonical_state_space(p);
        const double dt = std::min(0.01, max_resolution_step(m));
        const double t_end = 80.0;
        const Signal y = simulate(m, make_input(ImpulseTrain{{{0.0, 1.0}}}, t_end, dt), t_end, dt);
        const std::vector<double> c(p.coeffs().begin(), p.coeffs().end());
        CHECK(max_abs_after(y, 60.0) == doctest::Approx(oracle::residue_amplitude(c, w)).epsilon(0.01));
    }
}

TEST_CASE("step response settles on the DC gain") {
    const Polynomial p = design({4, 1.0, {5.0, 9.8}, {{0, 2.0}}});
    const StateSpaceModel m = canonical_state_space(p);
    const double dt = 0.01;
    const double t_end = 200.0;
    const Signal y = simulate(m, make_input(StepSchedule{{{0.0, 1.0}}}, t_end, dt), t_end, dt);

    // Mean over ten whole periods of the persistent 1 rad/s line.
    const double span = 20.0 * std::numbers::pi;
    const auto first = static_cast<std::size_t>(std::llround((t_end - span) / dt));
    double sum = 0.0;
    for (std::size_t k = first; k < y.size() - 1; ++k) sum += y.samples[k];
    const double mean = sum / static_cast<double>(y.size() - 1 - first);
    CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
}
