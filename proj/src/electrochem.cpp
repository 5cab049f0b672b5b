#include "pemfc/electrochem.hpp"

#include <cmath>
#include <stdexcept>

namespace pemfc {

double reversible_voltage(double delta_G, double n_e, double F) {
    return delta_G / (n_e * F);
}

double nernst_voltage(double T_fc, double P_H2_atm, double P_O2_atm) {
    if (P_H2_atm <= 0 || P_O2_atm <= 0)
        throw std::domain_error("nernst_voltage: partial pressures must be positive");
    return 1.229 - 8.5e-4 * (T_fc - 298.15) +
           4.3085e-5 * T_fc * (std::log(P_H2_atm) + 0.5 * std::log(P_O2_atm));
}

double activation_loss(double T, double alpha_ct, double i, double i0,
                       double R_univ, double F, bool* clamped) {
    if (i <= 0)
        throw std::domain_error("activation_loss: current density must be positive");
    if (i < i0) {
        if (clamped) *clamped = true;
        return 0.0;
    }
    if (clamped) *clamped = false;
    return R_univ * T / (2.0 * alpha_ct * F) * std::log(i / i0);
}

double ohmic_loss(double I_fc, double R_ohm_total) { return I_fc * R_ohm_total; }

double concentration_loss(double I_fc, double m_mt, double n_mt) {
    return m_mt * std::exp(n_mt * I_fc);
}

VoltageBreakdown cell_voltage(const ElectrochemParams& ech, const PhysicalConstants& phys,
                              double T_fc, double P_H2_atm, double P_O2_atm, double I_fc) {
    VoltageBreakdown v;
    v.E_nernst = nernst_voltage(T_fc, P_H2_atm, P_O2_atm);
    double i = I_fc / ech.A_eff;
    if (i < ech.i0) {
        v.v_act = 0.0;
        v.activation_clamped = i > 0.0;
    } else {
        v.v_act = activation_loss(T_fc, ech.alpha_ct, i, ech.i0, phys.R_univ, phys.F);
    }
    v.v_ohm = ohmic_loss(I_fc, ech.R_ohm / ech.A_eff);
    v.v_conc = concentration_loss(I_fc, ech.m_mt, ech.n_mt);
    v.v_cell = v.E_nernst - v.v_act - v.v_ohm - v.v_conc;
    v.v_stack = ech.N_cells * v.v_cell;
    return v;
}

}  // namespace pemfc
