#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "pemfc/electrochem.hpp"
#include "pemfc/plant.hpp"

namespace pemfc {

// Integration aborted (blow-up, invariant violation at dt_min, ...); carries
// the offending time.
struct SimulationError : std::runtime_error {
    SimulationError(const std::string& msg, double time)
        : std::runtime_error(msg + " at t = " + std::to_string(time)), t(time) {}
    double t;
};

// Piecewise-constant signal, right-continuous at its breakpoints.
class Schedule {
  public:
    static Schedule constant(double value);
    // Segments of (duration, value) starting at t = 0.
    static Schedule staircase(const std::vector<std::pair<double, double>>& levels);

    double at(double t) const;
    // Interior breakpoints, strictly increasing.
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    double duration() const { return duration_; }

  private:
    std::vector<double> start_{0.0};
    std::vector<double> value_{0.0};
    std::vector<double> breakpoints_;
    double duration_ = 0.0;
};

// Input/disturbance schedule over [0, t_end].
struct Profile {
    Schedule u;  // v_cm, V
    Schedule d;  // I_fc, A
    double t_end = 0.0;

    std::vector<double> merged_breakpoints() const;
};

// Staircase disturbance with a control-voltage schedule; t_end is the summed
// level duration.
Profile staircase_profile(const std::vector<std::pair<double, double>>& levels,
                          const Schedule& v_cm);

enum class StepMethod { rk4_fixed, rk45_adaptive };

struct IntegratorConfig {
    StepMethod method = StepMethod::rk45_adaptive;
    double dt = 1e-4;
    double dt_min = 1e-9;
    double dt_max = 1.0;
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;
    int record_stride = 1;
};

IntegratorConfig integrator_config(const SimConfig& s);

// Classical fourth-order Runge-Kutta update; rhs is f(t, x).
template <class State, class Rhs>
State rk4_step(const State& x, double t, double dt, Rhs&& rhs) {
    State k1 = rhs(t, x);
    State k2 = rhs(t + 0.5 * dt, State(x + 0.5 * dt * k1));
    State k3 = rhs(t + 0.5 * dt, State(x + 0.5 * dt * k2));
    State k4 = rhs(t + dt, State(x + dt * k3));
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct Sample {
    double t = 0;
    Vec6 x = Vec6::Zero();
    double v_cm = 0;
    double I_fc = 0;
    DerivedQuantities q;
    VoltageBreakdown v;
};

struct FlagCounts {
    long W_cp_clamped = 0;
    long W_rm_clamped = 0;
    long W_sm_reverse = 0;
    long W_ca_reverse = 0;
};

struct Trajectory {
    std::vector<Sample> samples;
    long steps = 0;           // accepted steps
    long rejected_steps = 0;  // adaptive rejections
    FlagCounts flags;         // clamp/reverse events over accepted steps
};

// Stack voltage evaluated at a plant state: oxygen pressure from the state,
// hydrogen pressure from the (constant) anode condition.
VoltageBreakdown breakdown_for_state(const Model& model, const Vec6& x, double I_fc);

// Integrate the plant over the profile. Inputs are held constant within a
// step and steps never straddle a profile breakpoint. Throws SimulationError
// on blow-up or on an invariant violation the step control cannot resolve.
Trajectory integrate(const Model& model, const Vec6& x0, const Profile& profile,
                     const IntegratorConfig& cfg);

struct SteadyStateResult {
    Vec6 x_star = Vec6::Zero();
    double residual_norm = 0;  // state-scaled
    int iterations = 0;
    bool converged = false;
};

// Damped Newton with central finite-difference Jacobian and a backtracking
// line search on the state-scaled residual norm; falls back to
// pseudo-transient continuation (integration spans of growing length) when
// the line search stalls.
SteadyStateResult find_steady_state(const Model& model, const Vec6& guess, double v_cm,
                                    double I_fc, double tol, int max_iter);

// Convenience: tolerance and iteration cap from the parameter set.
SteadyStateResult find_steady_state(const Model& model, const Vec6& guess, double v_cm,
                                    double I_fc);

// A plausible interior starting point for the Newton solve at (v_cm, I_fc).
Vec6 default_steady_guess(const Model& model, double v_cm);

}  // namespace pemfc
