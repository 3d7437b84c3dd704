#include "bhvar/integrator.hpp"

#include <cmath>
#include <stdexcept>

namespace bhvar {

void validate(const IntegratorConfig& config) {
    if (!(config.dt > 0.0) || !std::isfinite(config.dt)) {
        throw std::invalid_argument("integrator: dt must be positive and finite");
    }
    if (config.t_end < 0.0 || !std::isfinite(config.t_end)) {
        throw std::invalid_argument("integrator: t_end must be >= 0 and finite");
    }
    if (config.record_every < 1) {
        throw std::invalid_argument("integrator: record_every must be >= 1");
    }
}

namespace {

Vec step_rk4(const RhsFn& rhs, const Vec& y, double h) {
    const Vec k1 = rhs(y);
    const Vec k2 = rhs(y + 0.5 * h * k1);
    const Vec k3 = rhs(y + 0.5 * h * k2);
    const Vec k4 = rhs(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vec step_midpoint(const RhsFn& rhs, const Vec& y, double h) {
    const Vec k1 = rhs(y);
    return y + h * rhs(y + 0.5 * h * k1);
}

}  // namespace

Trajectory integrate(const RhsFn& rhs, const Vec& initial, const IntegratorConfig& config,
                     const std::vector<Monitor>& monitors) {
    validate(config);
    if (!initial.allFinite() || !rhs(initial).allFinite()) {
        throw std::invalid_argument("integrate: non-finite initial state or derivative");
    }

    Trajectory traj;
    traj.monitor_names.reserve(monitors.size());
    for (const Monitor& m : monitors) traj.monitor_names.push_back(m.name);
    traj.monitor_series.assign(monitors.size(), {});

    auto record = [&](double t, const Vec& y) {
        traj.times.push_back(t);
        for (size_t i = 0; i < monitors.size(); ++i) {
            traj.monitor_series[i].push_back(monitors[i].fn(y));
        }
        if (config.keep_snapshots) traj.snapshots.push_back(y);
    };

    Vec y = initial;
    double t = 0.0;
    record(t, y);

    auto step = [&](const Vec& state, double h) {
        return config.method == StepMethod::Rk4 ? step_rk4(rhs, state, h)
                                                : step_midpoint(rhs, state, h);
    };

    // Whole steps of dt plus one shorter step onto t_end when it is not a
    // multiple of dt; times come from the step index, not accumulation.
    const double t_eps = 1e-9 * config.dt;
    const auto n_full = static_cast<long long>(std::floor(config.t_end / config.dt + 1e-9));
    const double remainder = config.t_end - static_cast<double>(n_full) * config.dt;
    const bool has_partial = remainder > t_eps;

    for (long long i = 1; i <= n_full; ++i) {
        const Vec y_next = step(y, config.dt);
        if (!y_next.allFinite()) {
            traj.completed = false;
            break;
        }
        y = y_next;
        t = static_cast<double>(i) * config.dt;
        if (i % config.record_every == 0 || (i == n_full && !has_partial)) {
            record(t, y);
        }
    }
    if (traj.completed && has_partial) {
        const Vec y_next = step(y, remainder);
        if (y_next.allFinite()) {
            y = y_next;
            t = config.t_end;
            record(t, y);
        } else {
            traj.completed = false;
        }
    }
    traj.final_state = y;
    traj.t_reached = t;
    return traj;
}

}  // namespace bhvar
