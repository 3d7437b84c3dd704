// integrator.hpp — fixed-step integrator for the complex-valued Hamiltonian
// flows of the scheme modules, with named observable monitoring. No
// renormalization, fixed summation order, deterministic output.

#pragma once

#include "bhvar/linalg.hpp"

#include <functional>
#include <string>
#include <vector>

namespace bhvar {

enum class StepMethod { Rk4, Midpoint };

struct IntegratorConfig {
    StepMethod method{StepMethod::Rk4};
    double dt{1e-3};
    double t_end{0.0};
    int record_every{1};
    bool keep_snapshots{true};
};

void validate(const IntegratorConfig& config);

struct Monitor {
    std::string name;
    std::function<double(const Vec&)> fn;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> monitor_names;
    std::vector<std::vector<double>> monitor_series;  // one series per monitor
    std::vector<Vec> snapshots;                       // recorded states (optional)
    Vec final_state;
    bool completed{true};
    double t_reached{0.0};
};

using RhsFn = std::function<Vec(const Vec&)>;

// Steps from t = 0 to t_end recording monitors every record_every steps (and
// always at the endpoints). A non-finite state aborts the run; the trajectory
// then ends at the last good time with completed = false.
Trajectory integrate(const RhsFn& rhs, const Vec& initial, const IntegratorConfig& config,
                     const std::vector<Monitor>& monitors);

}  // namespace bhvar
