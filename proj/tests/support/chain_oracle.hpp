#pragma once

// Test-side equilibrium oracle. Constructs steady states of the six-state
// model by nested bisection on the algebraic balance equations, independent
// of the Newton solver under test. Polynomial maps are evaluated naively
// term by term (this doubles as the independent polynomial-evaluation oracle
// for the map operations).

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "pemfc/params.hpp"
#include "pemfc/types.hpp"

namespace pemfc::testing {

inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iters = 100) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((flo < 0.0) != (fm < 0.0)) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

struct ChainOracle {
    const ParameterSet& p;
    // derived quantities, transcribed independently
    double M_a_atm, y_O2, y_N2, Omega_atm, c1, c2, c3, P_v_ca, kappa;

    explicit ChainOracle(const ParameterSet& params) : p(params) {
        const auto& ph = p.physical;
        M_a_atm = ph.X_O2 * ph.M_O2 + (1.0 - ph.X_O2) * ph.M_N2;
        y_O2 = ph.X_O2 * ph.M_O2 / M_a_atm;
        y_N2 = (1.0 - ph.X_O2) * ph.M_N2 / M_a_atm;
        double r = ph.phi_atm * ph.P_sat_Tatm / ph.P_atm;
        Omega_atm = ph.M_v / ph.M_a * r / (1.0 - r);
        c1 = ph.R_N2 * p.operating.T_st / p.auxiliary.V_ca;
        c2 = ph.R_O2 * p.operating.T_st / p.auxiliary.V_ca;
        P_v_ca = p.operating.phi_ca * saturation_pressure(ph, p.operating.T_st);
        c3 = p.auxiliary.V_ca * P_v_ca * ph.M_v / (ph.R_univ * p.operating.T_st);
        kappa = (ph.gamma - 1.0) / ph.gamma;
    }

    double naive_tau_cp(double omega, double P_sm) const {
        const auto& a = p.maps.alpha_tau;
        double w = p.maps.speed_scale * omega;
        double pp = p.maps.pressure_scale * P_sm;
        double pi = 3.14159265358979323846;
        return pi / 30.0 *
               (a[0] + a[1] * std::pow(w, 1.0) + a[2] + a[3] * std::pow(w, 1.0) +
                a[4] * std::pow(w, 2.0) + a[5] * std::pow(pp, 1.0) + a[6] * pp * w +
                a[7] * std::pow(pp, 2.0));
    }

    double naive_W_cp_raw(double omega, double P_sm) const {
        const auto& b = p.maps.beta_W;
        double w = p.maps.speed_scale * omega;
        double pp = p.maps.pressure_scale * P_sm;
        return b[0] + b[1] * std::pow(pp, 1.0) + b[2] * std::pow(pp, 2.0) +
               b[3] * std::pow(w, 1.0) + b[4] * pp * w + b[5] * std::pow(w, 2.0);
    }

    double naive_W_rm_raw(double P_rm) const {
        double pp = p.maps.pressure_scale * P_rm;
        double sum = 0.0;
        for (int i = 1; i <= 5; ++i) sum += p.maps.pa[static_cast<size_t>(i)] * std::pow(pp, i);
        return sum;
    }

    double tau_cm(double v_cm, double omega) const {
        const auto& a = p.auxiliary;
        return a.eta_cm * a.k_t / a.R_cm * (v_cm - a.k_v * omega);
    }

    double exit_temperature(double P_sm) const {
        return p.operating.T_atm +
               p.operating.T_atm / p.auxiliary.eta_cp *
                   (std::pow(P_sm / p.physical.P_atm, kappa) - 1.0);
    }

    struct CathodeState {
        double P_ca, P_rm, m_O2, m_N2;
    };

    // Species/outflow balances for a given (total supply flow, current).
    std::optional<CathodeState> cathode_chain(double W, double I_fc) const {
        double W_r = p.physical.M_O2 * p.electrochem.N_cells * I_fc / (4.0 * p.physical.F);
        double W_dry = W / (1.0 + Omega_atm);
        double O2_in = y_O2 * W_dry;
        double N2_in = y_N2 * W_dry;
        double O2_out = O2_in - W_r;
        double N2_out = N2_in;
        if (O2_out <= 0.0 || N2_out <= 0.0) return std::nullopt;
        double rho = O2_out / N2_out;
        double W_dry_out = O2_out + N2_out;

        double S = 1e-3;
        double W_ca = 0.0, P_rm = 0.0, P_ca = 0.0, m_N2 = 0.0;
        for (int i = 0; i < 200; ++i) {
            W_ca = W_dry_out * (1.0 + c3 / S);
            P_rm = bisect([&](double P) { return naive_W_rm_raw(P) - W_ca; }, 0.5e5, 5.0e5, 80);
            P_ca = P_rm + W_ca / p.auxiliary.K_ca_out;
            m_N2 = (P_ca - P_v_ca) / (c1 + c2 * rho);
            if (m_N2 <= 0.0) return std::nullopt;
            double S_new = (1.0 + rho) * m_N2;
            if (std::abs(S_new - S) < 1e-19) {
                S = S_new;
                break;
            }
            S = S_new;
        }
        m_N2 = S / (1.0 + rho);
        return CathodeState{P_ca, P_rm, rho * m_N2, m_N2};
    }

    // Supply-manifold flow balance at fixed rotor speed.
    std::optional<std::pair<double, CathodeState>> flow_balance(double omega, double I_fc) const {
        auto f = [&](double P_sm) -> double {
            double W = std::max(0.0, naive_W_cp_raw(omega, P_sm));
            auto ch = cathode_chain(W, I_fc);
            if (!ch) return std::nan("");
            return W - p.auxiliary.K_sm_out * (P_sm - ch->P_ca);
        };
        const double lo = 1.0e5, hi = 2.4e5;
        const int n = 60;
        double prev_P = lo, prev_f = f(lo);
        for (int i = 1; i <= n; ++i) {
            double P = lo + (hi - lo) * i / n;
            double fi = f(P);
            if (std::isfinite(prev_f) && std::isfinite(fi) && (prev_f < 0.0) != (fi < 0.0)) {
                double P_sm = bisect(f, prev_P, P, 80);
                double W = std::max(0.0, naive_W_cp_raw(omega, P_sm));
                auto ch = cathode_chain(W, I_fc);
                if (!ch) return std::nullopt;
                return std::make_pair(P_sm, *ch);
            }
            prev_P = P;
            prev_f = fi;
        }
        return std::nullopt;
    }

    // Full equilibrium at (v_cm, I_fc): torque balance as the outer residual.
    std::optional<Vec6> equilibrium(double v_cm, double I_fc) const {
        auto resid = [&](double omega) -> double {
            auto fb = flow_balance(omega, I_fc);
            if (!fb) return std::nan("");
            return tau_cm(v_cm, omega) - naive_tau_cp(omega, fb->first);
        };
        const double lo = 0.5, hi = 900.0;
        const int n = 300;
        double prev_w = lo, prev_r = resid(lo);
        for (int i = 1; i <= n; ++i) {
            double w = lo + (hi - lo) * i / n;
            double ri = resid(w);
            if (std::isfinite(prev_r) && std::isfinite(ri) && (prev_r < 0.0) != (ri < 0.0)) {
                double omega = bisect(resid, prev_w, w, 90);
                auto fb = flow_balance(omega, I_fc);
                if (!fb) return std::nullopt;
                double P_sm = fb->first;
                double m_sm = P_sm * p.auxiliary.V_sm * M_a_atm /
                              (p.physical.R_univ * exit_temperature(P_sm));
                Vec6 x;
                x[ix_omega_cp] = omega;
                x[ix_p_sm] = P_sm;
                x[ix_m_sm] = m_sm;
                x[ix_m_o2] = fb->second.m_O2;
                x[ix_m_n2] = fb->second.m_N2;
                x[ix_p_rm] = fb->second.P_rm;
                return x;
            }
            prev_w = w;
            prev_r = ri;
        }
        return std::nullopt;
    }

    // The no-flow equilibrium with u = d = 0: rotor at rest, every manifold at
    // the flow map's zero-flow pressure, masses split at the dry-air ratio.
    Vec6 ambient_equilibrium() const {
        double P_amb =
            bisect([&](double P) { return naive_W_cp_raw(0.0, P); }, 0.5e5, 2.0e5, 100);
        double rho = y_O2 / y_N2;
        double m_N2 = (P_amb - P_v_ca) / (c1 + c2 * rho);
        Vec6 x;
        x[ix_omega_cp] = 0.0;
        x[ix_p_sm] = P_amb;
        x[ix_m_sm] = P_amb * p.auxiliary.V_sm * M_a_atm /
                     (p.physical.R_univ * p.operating.T_atm);
        x[ix_m_o2] = rho * m_N2;
        x[ix_m_n2] = m_N2;
        x[ix_p_rm] = P_amb;
        return x;
    }
};

}  // namespace pemfc::testing
