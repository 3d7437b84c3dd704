#include "bhvar/integrator.hpp"

#include "bhvar/mf_dynamics.hpp"

#include <doctest.h>

using namespace bhvar;

TEST_CASE("config validation") {
    IntegratorConfig config;
    config.dt = 0.0;
    CHECK_THROWS_AS(validate(config), std::invalid_argument);
    config.dt = 1e-3;
    config.t_end = -1.0;
    CHECK_THROWS_AS(validate(config), std::invalid_argument);
    config.t_end = 1.0;
    config.record_every = 0;
    CHECK_THROWS_AS(validate(config), std::invalid_argument);
}

TEST_CASE("a zero field keeps the state constant") {
    IntegratorConfig config;
    config.dt = 0.1;
    config.t_end = 1.0;
    Vec y0(2);
    y0 << cx(0.3, 0.4), cx(-0.1, 0.2);
    const Trajectory traj =
        integrate([](const Vec& y) { return Vec(Vec::Zero(y.size())); }, y0, config, {});
    CHECK((traj.final_state - y0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(traj.t_reached == doctest::Approx(1.0));
}

TEST_CASE("t_end = 0 records exactly the initial point") {
    IntegratorConfig config;
    config.dt = 0.1;
    config.t_end = 0.0;
    Vec y0 = Vec::Ones(1);
    const Trajectory traj =
        integrate([](const Vec& y) { return Vec(cx(0.0, 1.0) * y); }, y0, config, {});
    REQUIRE(traj.times.size() == 1);
    CHECK(traj.times[0] == 0.0);
}

TEST_CASE("linear problem: analytic solution and fourth-order convergence") {
    const double T = 1.0;
    RhsFn rhs = [T](const Vec& y) { return Vec(cx(0.0, T) * y); };
    Vec y0 = Vec::Ones(1);

    auto error_at = [&](double dt, StepMethod method) {
        IntegratorConfig config;
        config.method = method;
        config.dt = dt;
        config.t_end = 5.0;
        config.record_every = 1 << 20;
        config.keep_snapshots = false;
        const Trajectory traj = integrate(rhs, y0, config, {});
        return std::abs(traj.final_state(0) - std::exp(cx(0.0, T * 5.0)));
    };

    const double e1 = error_at(0.05, StepMethod::Rk4);
    const double e2 = error_at(0.025, StepMethod::Rk4);
    CHECK(e1 / e2 > 14.0);
    CHECK(e1 / e2 < 18.0);

    // midpoint is second order
    const double m1 = error_at(0.01, StepMethod::Midpoint);
    const double m2 = error_at(0.005, StepMethod::Midpoint);
    CHECK(m1 / m2 > 3.5);
    CHECK(m1 / m2 < 4.5);
}

TEST_CASE("two-site free flow matches the analytic rotation at 1e-8") {
    const BHParams params{0.0, 2, build_ring_hopping(2, 1.0, true)};
    Vec z0(2);
    z0 << 1.0, 0.0;
    IntegratorConfig config;
    config.dt = 1e-3;
    config.t_end = 10.0;
    config.record_every = 100;
    RhsFn rhs = [&](const Vec& y) { return rhs_dnls(DnlsState{y}, params); };
    const Trajectory traj = integrate(rhs, z0, config, {});
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        CHECK(std::abs(traj.snapshots[i](0) - cx(std::cos(t), 0.0)) < 1e-8);
        CHECK(std::abs(traj.snapshots[i](1) - cx(0.0, std::sin(t))) < 1e-8);
    }
}

TEST_CASE("non-finite states abort with the last good time") {
    // blow-up field: dy/dt = y^3 diverges in finite time
    RhsFn rhs = [](const Vec& y) {
        Vec out(y.size());
        for (Eigen::Index i = 0; i < y.size(); ++i) out(i) = y(i) * y(i) * y(i);
        return out;
    };
    Vec y0 = Vec::Ones(1) * 2.0;
    IntegratorConfig config;
    config.dt = 0.05;
    config.t_end = 10.0;
    const Trajectory traj = integrate(rhs, y0, config, {});
    CHECK_FALSE(traj.completed);
    CHECK(traj.t_reached < 10.0);
    CHECK(traj.final_state.allFinite());
}

TEST_CASE("recording stride and endpoint") {
    IntegratorConfig config;
    config.dt = 0.1;
    config.t_end = 1.05;  // not a multiple of dt
    config.record_every = 3;
    RhsFn rhs = [](const Vec& y) { return Vec(cx(0.0, 0.5) * y); };
    const Trajectory traj = integrate(rhs, Vec::Ones(1), config, {});
    REQUIRE(traj.times.size() >= 3);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(1.05));
    for (size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
}
