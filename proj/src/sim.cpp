#include "pemfc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pemfc {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,      0.0,        500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84,  0.0};
constexpr double kB4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

struct InvalidState : std::runtime_error {
    InvalidState() : std::runtime_error("state invariant violated") {}
};

}  // namespace

Schedule Schedule::constant(double value) {
    Schedule s;
    s.value_ = {value};
    s.duration_ = 0.0;
    return s;
}

Schedule Schedule::staircase(const std::vector<std::pair<double, double>>& levels) {
    if (levels.empty()) throw std::invalid_argument("staircase: no levels");
    Schedule s;
    s.start_.clear();
    s.value_.clear();
    double t = 0.0;
    for (const auto& [duration, value] : levels) {
        if (duration <= 0) throw std::invalid_argument("staircase: durations must be positive");
        s.start_.push_back(t);
        s.value_.push_back(value);
        t += duration;
    }
    s.duration_ = t;
    s.breakpoints_.assign(s.start_.begin() + 1, s.start_.end());
    return s;
}

double Schedule::at(double t) const {
    auto it = std::upper_bound(start_.begin(), start_.end(), t);
    size_t idx = static_cast<size_t>(std::distance(start_.begin(), it));
    if (idx == 0) return value_.front();
    return value_[std::min(idx - 1, value_.size() - 1)];
}

std::vector<double> Profile::merged_breakpoints() const {
    std::vector<double> bp;
    for (double t : u.breakpoints())
        if (t > 0 && t < t_end) bp.push_back(t);
    for (double t : d.breakpoints())
        if (t > 0 && t < t_end) bp.push_back(t);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    return bp;
}

Profile staircase_profile(const std::vector<std::pair<double, double>>& levels,
                          const Schedule& v_cm) {
    Profile pr;
    pr.d = Schedule::staircase(levels);
    pr.u = v_cm;
    pr.t_end = pr.d.duration();
    return pr;
}

IntegratorConfig integrator_config(const SimConfig& s) {
    IntegratorConfig c;
    c.method = s.method == "rk4-fixed" ? StepMethod::rk4_fixed : StepMethod::rk45_adaptive;
    c.dt = s.dt;
    c.dt_min = s.dt_min;
    c.dt_max = s.dt_max;
    c.rel_tol = s.rel_tol;
    c.abs_tol = s.abs_tol;
    c.record_stride = s.record_stride;
    return c;
}

VoltageBreakdown breakdown_for_state(const Model& model, const Vec6& x, double I_fc) {
    double P_O2_atm = pa_to_atm(model.dc.c2 * x[ix_m_o2]);
    double P_H2_atm = pa_to_atm(model.params.operating.P_an);
    return cell_voltage(model.params.electrochem, model.params.physical,
                        model.params.operating.T_st, P_H2_atm, P_O2_atm, I_fc);
}

namespace {

void count_flags(FlagCounts& fc, const FlowFlags& f) {
    fc.W_cp_clamped += f.W_cp_clamped;
    fc.W_rm_clamped += f.W_rm_clamped;
    fc.W_sm_reverse += f.W_sm_reverse;
    fc.W_ca_reverse += f.W_ca_reverse;
}

class PlantIntegrator {
  public:
    PlantIntegrator(const Model& model, const Profile& profile, const IntegratorConfig& cfg)
        : model_(model), profile_(profile), cfg_(cfg) {
        const auto& scale = model.params.sim.state_scale;
        for (int i = 0; i < 6; ++i) scale_[i] = scale[static_cast<size_t>(i)];
    }

    Trajectory run(const Vec6& x0) {
        if (!is_valid_state(x0, model_.params))
            throw SimulationError("initial state violates invariants", 0.0);
        traj_ = Trajectory{};
        t_ = 0.0;
        x_ = x0;
        record();
        if (profile_.t_end <= 0.0) return std::move(traj_);

        segments_ = profile_.merged_breakpoints();
        segments_.push_back(profile_.t_end);
        seg_idx_ = 0;

        if (cfg_.method == StepMethod::rk4_fixed)
            run_fixed();
        else
            run_adaptive();
        if (traj_.samples.back().t != t_) record();
        return std::move(traj_);
    }

  private:
    Vec6 rhs(const Vec6& x, double u, double d, FlowFlags* flags = nullptr) const {
        if (!is_valid_state(x, model_.params)) throw InvalidState{};
        DerivedQuantities q;
        Vec6 dx = state_derivative(x, PlantInput{u}, Disturbance{d}, model_, &q);
        if (flags) *flags = q.flags;
        return dx;
    }

    double seg_end() const { return segments_[seg_idx_]; }

    void advance_segment() {
        while (seg_idx_ < segments_.size() && t_ >= seg_end() - 1e-14 * profile_.t_end)
            ++seg_idx_;
    }

    void after_step() {
        ++traj_.steps;
        check_blowup();
        if (traj_.steps % cfg_.record_stride == 0) record();
    }

    void run_fixed() {
        while (t_ < profile_.t_end) {
            advance_segment();
            if (seg_idx_ >= segments_.size()) break;
            double u = profile_.u.at(t_);
            double d = profile_.d.at(t_);
            double dt = std::min(cfg_.dt, seg_end() - t_);
            FlowFlags flags;
            Vec6 x_new;
            try {
                auto f = [&](double, const Vec6& x) { return rhs(x, u, d); };
                rhs(x_, u, d, &flags);  // flag accounting on the accepted step
                x_new = rk4_step(x_, t_, dt, f);
            } catch (const InvalidState&) {
                throw SimulationError("state invariant violated during fixed step", t_);
            }
            if (!is_valid_state(x_new, model_.params))
                throw SimulationError("state invariant violated during fixed step", t_);
            count_flags(traj_.flags, flags);
            x_ = x_new;
            t_ += dt;
            after_step();
        }
    }

    void run_adaptive() {
        double dt = std::min(cfg_.dt_max, std::max(cfg_.dt_min, cfg_.dt));
        while (t_ < profile_.t_end) {
            advance_segment();
            if (seg_idx_ >= segments_.size()) break;
            double u = profile_.u.at(t_);
            double d = profile_.d.at(t_);
            bool truncated = t_ + dt >= seg_end();
            double h = truncated ? seg_end() - t_ : dt;

            bool ok = false;
            Vec6 x_new;
            double err = 0.0;
            FlowFlags flags;
            try {
                err = dp45(x_, u, d, h, x_new, &flags);
                ok = err <= 1.0 && is_valid_state(x_new, model_.params);
            } catch (const InvalidState&) {
                ok = false;
                err = std::numeric_limits<double>::infinity();
            }

            if (ok) {
                count_flags(traj_.flags, flags);
                x_ = x_new;
                t_ = truncated ? seg_end() : t_ + h;
                after_step();
                double grow = std::isfinite(err) && err > 0.0
                                  ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0)
                                  : 5.0;
                dt = std::clamp(h * grow, cfg_.dt_min, cfg_.dt_max);
            } else {
                ++traj_.rejected_steps;
                double shrink = std::isfinite(err)
                                    ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9)
                                    : 0.2;
                double h_next = h * shrink;
                if (h_next < cfg_.dt_min)
                    throw SimulationError("adaptive step underflow (dt_min reached)", t_);
                dt = h_next;
            }
        }
    }

    // One Dormand-Prince step; returns the scaled error norm and fills x_new.
    double dp45(const Vec6& x, double u, double d, double h, Vec6& x_new, FlowFlags* flags) {
        Vec6 k[7];
        k[0] = rhs(x, u, d, flags);
        for (int s = 1; s < 7; ++s) {
            Vec6 xs = x;
            for (int j = 0; j < s; ++j) xs += h * kA[s][j] * k[j];
            k[s] = rhs(xs, u, d);
        }
        x_new = x;
        Vec6 err = Vec6::Zero();
        for (int s = 0; s < 7; ++s) {
            x_new += h * kB5[s] * k[s];
            err += h * (kB5[s] - kB4[s]) * k[s];
        }
        double acc = 0.0;
        for (int i = 0; i < 6; ++i) {
            double tol = cfg_.abs_tol * scale_[i] +
                         cfg_.rel_tol * std::max(std::abs(x[i]), std::abs(x_new[i]));
            double e = err[i] / tol;
            acc += e * e;
        }
        return std::sqrt(acc / 6.0);
    }

    void check_blowup() const {
        for (int i = 0; i < 6; ++i) {
            if (!std::isfinite(x_[i]) ||
                std::abs(x_[i]) > model_.params.sim.blowup_factor * scale_[i])
                throw SimulationError("state blow-up detected", t_);
        }
    }

    void record() {
        Sample s;
        s.t = t_;
        s.x = x_;
        s.v_cm = profile_.t_end > 0 ? profile_.u.at(std::min(t_, profile_.t_end)) : profile_.u.at(0.0);
        s.I_fc = profile_.t_end > 0 ? profile_.d.at(std::min(t_, profile_.t_end)) : profile_.d.at(0.0);
        state_derivative(s.x, PlantInput{s.v_cm}, Disturbance{s.I_fc}, model_, &s.q);
        s.v = breakdown_for_state(model_, s.x, s.I_fc);
        traj_.samples.push_back(std::move(s));
    }

    const Model& model_;
    const Profile& profile_;
    IntegratorConfig cfg_;
    double scale_[6] = {};
    Trajectory traj_;
    std::vector<double> segments_;
    size_t seg_idx_ = 0;
    double t_ = 0.0;
    Vec6 x_ = Vec6::Zero();
};

}  // namespace

Trajectory integrate(const Model& model, const Vec6& x0, const Profile& profile,
                     const IntegratorConfig& cfg) {
    PlantIntegrator integ(model, profile, cfg);
    return integ.run(x0);
}

namespace {

Vec6 scaled_residual(const Model& model, const Vec6& x, double u, double d) {
    Vec6 f = state_derivative(x, PlantInput{u}, Disturbance{d}, model);
    Vec6 r;
    for (int i = 0; i < 6; ++i) r[i] = f[i] / model.params.sim.state_scale[static_cast<size_t>(i)];
    return r;
}

bool try_residual(const Model& model, const Vec6& x, double u, double d, Vec6& r) {
    if (!is_valid_state(x, model.params)) return false;
    try {
        r = scaled_residual(model, x, u, d);
    } catch (const std::exception&) {
        return false;
    }
    return r.allFinite();
}

}  // namespace

Vec6 default_steady_guess(const Model& model, double v_cm) {
    const auto& p = model.params;
    const auto& dc = model.dc;
    Vec6 x;
    x[ix_omega_cp] = std::max(10.0, 0.85 * v_cm / p.auxiliary.k_v);
    x[ix_p_sm] = 1.08 * p.physical.P_atm;
    double T_cp = compressor_exit_temperature(x[ix_p_sm], p.physical, p.auxiliary,
                                              p.operating.T_atm);
    x[ix_m_sm] = x[ix_p_sm] * p.auxiliary.V_sm * dc.M_a_atm / (p.physical.R_univ * T_cp);
    double P_dry = std::max(0.2 * p.physical.P_atm, x[ix_p_sm] - dc.P_v_ca);
    double rho = dc.y_O2 / dc.y_N2;  // dry-air outflow mass ratio
    x[ix_m_n2] = P_dry / (dc.c1 + dc.c2 * rho);
    x[ix_m_o2] = rho * x[ix_m_n2];
    x[ix_p_rm] = 0.9995 * x[ix_p_sm];
    return x;
}

SteadyStateResult find_steady_state(const Model& model, const Vec6& guess, double v_cm,
                                    double I_fc, double tol, int max_iter) {
    SteadyStateResult res;
    Vec6 x = guess;
    Vec6 r;
    if (!try_residual(model, x, v_cm, I_fc, r)) {
        res.x_star = x;
        res.residual_norm = std::numeric_limits<double>::infinity();
        return res;
    }
    double norm = r.norm();
    Vec6 best_x = x;
    double best_norm = norm;
    int iter = 0;
    int ptc_rounds = 0;

    while (norm >= tol && iter < max_iter) {
        // central-difference Jacobian of the scaled residual
        Mat6 J;
        bool fd_ok = true;
        for (int j = 0; j < 6 && fd_ok; ++j) {
            double h = std::max(1e-6 * std::abs(x[j]), 1e-10);
            Vec6 xp = x, xm = x, rp, rm;
            xp[j] += h;
            xm[j] -= h;
            if (!try_residual(model, xp, v_cm, I_fc, rp) ||
                !try_residual(model, xm, v_cm, I_fc, rm)) {
                fd_ok = false;
                break;
            }
            J.col(j) = (rp - rm) / (2.0 * h);
        }

        bool advanced = false;
        if (fd_ok) {
            Vec6 delta = J.partialPivLu().solve(-r);
            if (delta.allFinite()) {
                double lambda = 1.0;
                for (int bt = 0; bt < 14; ++bt, lambda *= 0.5) {
                    Vec6 x_trial = x + lambda * delta;
                    Vec6 r_trial;
                    if (!try_residual(model, x_trial, v_cm, I_fc, r_trial)) continue;
                    double n_trial = r_trial.norm();
                    if (n_trial < (1.0 - 1e-4 * lambda) * norm) {
                        x = x_trial;
                        r = r_trial;
                        norm = n_trial;
                        advanced = true;
                        break;
                    }
                }
            }
        }
        ++iter;

        if (!advanced) {
            // pseudo-transient continuation: relax along the flow with growing spans
            if (ptc_rounds >= 3) break;
            ++ptc_rounds;
            IntegratorConfig icfg = integrator_config(model.params.sim);
            icfg.method = StepMethod::rk45_adaptive;
            icfg.rel_tol = 1e-8;
            icfg.record_stride = 1 << 20;
            double span = 1.0;
            for (int round = 0; round < 7; ++round, span *= 2.0) {
                Profile pr;
                pr.u = Schedule::constant(v_cm);
                pr.d = Schedule::constant(I_fc);
                pr.t_end = span;
                try {
                    Trajectory tr = integrate(model, x, pr, icfg);
                    Vec6 x_relaxed = tr.samples.back().x;
                    Vec6 r_relaxed;
                    if (try_residual(model, x_relaxed, v_cm, I_fc, r_relaxed)) {
                        x = x_relaxed;
                        r = r_relaxed;
                        norm = r.norm();
                    }
                } catch (const SimulationError&) {
                    break;
                }
            }
        }
        if (norm < best_norm) {
            best_norm = norm;
            best_x = x;
        }
    }

    res.x_star = norm <= best_norm ? x : best_x;
    res.residual_norm = std::min(norm, best_norm);
    res.iterations = iter;
    res.converged = res.residual_norm < tol;
    return res;
}

SteadyStateResult find_steady_state(const Model& model, const Vec6& guess, double v_cm,
                                    double I_fc) {
    return find_steady_state(model, guess, v_cm, I_fc, model.params.sim.newton_tol,
                             model.params.sim.newton_max_iter);
}

}  // namespace pemfc
