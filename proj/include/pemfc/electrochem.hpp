#pragma once

#include "pemfc/params.hpp"

namespace pemfc {

// Open-circuit potential and the three loss terms, evaluated at one current.
// The identity v_cell = E_nernst - v_act - v_ohm - v_conc holds exactly by
// construction, and v_stack = N_cells * v_cell.
struct VoltageBreakdown {
    double E_nernst = 0;
    double v_act = 0;
    double v_ohm = 0;
    double v_conc = 0;
    double v_cell = 0;
    double v_stack = 0;
    bool activation_clamped = false;  // current density below the exchange current
};

// delta_G / (n_e * F), volts.
double reversible_voltage(double delta_G, double n_e, double F);

// Open-circuit voltage. Partial pressures in atm (the empirical coefficients
// assume atm); throws std::domain_error on non-positive pressure.
double nernst_voltage(double T_fc, double P_H2_atm, double P_O2_atm);

// Tafel activation loss, R_univ*T/(2*alpha_ct*F) * ln(i/i0). Valid for
// i >= i0; i in (0, i0) clamps to zero and sets *clamped; i <= 0 throws.
double activation_loss(double T, double alpha_ct, double i, double i0,
                       double R_univ, double F, bool* clamped = nullptr);

double ohmic_loss(double I_fc, double R_ohm_total);

// m_mt * exp(n_mt * I_fc).
double concentration_loss(double I_fc, double m_mt, double n_mt);

// Composes the four terms at stack temperature T_fc and the given partial
// pressures (atm). Current density is I_fc / A_eff; the ohmic resistance is
// the area-specific R_ohm divided by A_eff.
VoltageBreakdown cell_voltage(const ElectrochemParams& ech, const PhysicalConstants& phys,
                              double T_fc, double P_H2_atm, double P_O2_atm, double I_fc);

}  // namespace pemfc
