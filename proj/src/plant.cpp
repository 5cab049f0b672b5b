#include "pemfc/plant.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pemfc {

namespace {
constexpr double kRpmToRad = std::numbers::pi / 30.0;
}

double motor_torque(double v_cm, double omega_cp, const AuxiliaryParams& aux) {
    return aux.eta_cm * (aux.k_t / aux.R_cm) * (v_cm - aux.k_v * omega_cp);
}

double load_torque(double omega_cp, double P_sm, const MapCoefficients& maps) {
    const auto& a = maps.alpha_tau;
    double w = maps.speed_scale * omega_cp;
    double p = maps.pressure_scale * P_sm;
    return kRpmToRad *
           (a[0] + a[1] * w + a[2] + a[3] * w + a[4] * w * w + a[5] * p + a[6] * p * w +
            a[7] * p * p);
}

double compressor_flow(double omega_cp, double P_sm, const MapCoefficients& maps,
                       bool* clamped) {
    const auto& b = maps.beta_W;
    double w = maps.speed_scale * omega_cp;
    double p = maps.pressure_scale * P_sm;
    double raw = b[0] + b[1] * p + b[2] * p * p + b[3] * w + b[4] * p * w + b[5] * w * w;
    if (clamped) *clamped = raw < 0.0;
    return raw < 0.0 ? 0.0 : raw;
}

double compressor_exit_temperature(double P_sm, const PhysicalConstants& phys,
                                   const AuxiliaryParams& aux, double T_atm) {
    if (P_sm <= 0)
        throw std::domain_error("compressor_exit_temperature: pressure ratio must be positive");
    double kappa = (phys.gamma - 1.0) / phys.gamma;
    return T_atm + (T_atm / aux.eta_cp) * (std::pow(P_sm / phys.P_atm, kappa) - 1.0);
}

double supply_manifold_temperature(double P_sm, double m_sm, const ParameterSet& p,
                                   const DerivedConstants& dc) {
    if (m_sm < p.sim.m_sm_floor)
        throw std::domain_error("supply_manifold_temperature: manifold mass below floor");
    return P_sm * p.auxiliary.V_sm * dc.M_a_atm / (p.physical.R_univ * m_sm);
}

CathodePressure cathode_pressure(double m_O2, double m_N2, double P_v_ca,
                                 const DerivedConstants& dc) {
    CathodePressure c;
    c.P_O2 = dc.c2 * m_O2;
    c.P_N2 = dc.c1 * m_N2;
    c.P_ca = P_v_ca + c.P_O2 + c.P_N2;
    return c;
}

FlowSplit flow_splits(double W_sm_out, const DerivedConstants& dc) {
    double dry = W_sm_out / (1.0 + dc.Omega_atm);
    return FlowSplit{dc.y_O2 * dry, dc.y_N2 * dry};
}

CathodeOutflows cathode_outflows(double m_O2, double m_N2, double P_ca, double P_rm,
                                 const DerivedConstants& dc, const AuxiliaryParams& aux) {
    CathodeOutflows o;
    o.W_ca_out = aux.K_ca_out * (P_ca - P_rm);
    o.reverse = o.W_ca_out < 0.0;
    double m_ca = m_O2 + m_N2 + dc.c3;
    o.W_O2_out = m_O2 / m_ca * o.W_ca_out;
    o.W_N2_out = m_N2 / m_ca * o.W_ca_out;
    return o;
}

double oxygen_reacted(double I_fc, int N_cells, const PhysicalConstants& phys) {
    return phys.M_O2 * N_cells * I_fc / (4.0 * phys.F);
}

double return_manifold_outflow(double P_rm, const MapCoefficients& maps, bool* clamped) {
    double p = maps.pressure_scale * P_rm;
    double raw = 0.0;
    double pk = 1.0;
    for (int i = 1; i <= 5; ++i) {
        pk *= p;
        raw += maps.pa[i] * pk;
    }
    if (clamped) *clamped = raw < 0.0;
    return raw < 0.0 ? 0.0 : raw;
}

Vec6 state_derivative(const Vec6& x, const PlantInput& u, const Disturbance& d,
                      const Model& model, DerivedQuantities* q) {
    const ParameterSet& p = model.params;
    const DerivedConstants& dc = model.dc;
    const auto& aux = p.auxiliary;
    const auto& oc = p.operating;

    const double omega = x[ix_omega_cp];
    const double P_sm = x[ix_p_sm];
    const double m_sm = x[ix_m_sm];
    const double m_O2 = x[ix_m_o2];
    const double m_N2 = x[ix_m_n2];
    const double P_rm = x[ix_p_rm];

    DerivedQuantities dq;
    dq.P_v_ca = dc.P_v_ca;
    dq.tau_cm = motor_torque(u.v_cm, omega, aux);
    dq.tau_cp = load_torque(omega, P_sm, p.maps);
    dq.W_cp = compressor_flow(omega, P_sm, p.maps, &dq.flags.W_cp_clamped);
    dq.T_cp = compressor_exit_temperature(P_sm, p.physical, aux, oc.T_atm);
    dq.T_sm = supply_manifold_temperature(P_sm, m_sm, p, dc);

    CathodePressure ca = cathode_pressure(m_O2, m_N2, dc.P_v_ca, dc);
    dq.P_ca = ca.P_ca;
    dq.P_O2 = ca.P_O2;
    dq.P_N2 = ca.P_N2;

    dq.W_sm_out = aux.K_sm_out * (P_sm - ca.P_ca);
    dq.flags.W_sm_reverse = dq.W_sm_out < 0.0;

    FlowSplit in = flow_splits(dq.W_sm_out, dc);
    dq.W_O2_in = in.W_O2_in;
    dq.W_N2_in = in.W_N2_in;

    CathodeOutflows out = cathode_outflows(m_O2, m_N2, ca.P_ca, P_rm, dc, aux);
    dq.W_ca_out = out.W_ca_out;
    dq.W_O2_out = out.W_O2_out;
    dq.W_N2_out = out.W_N2_out;
    dq.flags.W_ca_reverse = out.reverse;
    dq.m_ca = m_O2 + m_N2 + dc.c3;

    dq.W_O2_reacted = oxygen_reacted(d.I_fc, p.electrochem.N_cells, p.physical);
    dq.W_rm_out = return_manifold_outflow(P_rm, p.maps, &dq.flags.W_rm_clamped);

    Vec6 dx;
    dx[ix_omega_cp] = (dq.tau_cm - dq.tau_cp) / aux.J_cp;
    dx[ix_p_sm] = p.physical.gamma * p.physical.R_univ / (dc.M_a_atm * aux.V_sm) *
                  (dq.W_cp * dq.T_cp - dq.W_sm_out * dq.T_sm);
    dx[ix_m_sm] = dq.W_cp - dq.W_sm_out;
    dx[ix_m_o2] = dq.W_O2_in - dq.W_O2_out - dq.W_O2_reacted;
    dx[ix_m_n2] = dq.W_N2_in - dq.W_N2_out;
    dx[ix_p_rm] = p.physical.R_a * oc.T_st / aux.V_rm * (dq.W_ca_out - dq.W_rm_out);

    if (q) *q = dq;
    return dx;
}

bool is_valid_state(const Vec6& x, const ParameterSet& p) {
    return std::isfinite(x[ix_omega_cp]) && x[ix_omega_cp] >= 0.0 &&
           std::isfinite(x[ix_p_sm]) && x[ix_p_sm] > 0.0 &&
           std::isfinite(x[ix_m_sm]) && x[ix_m_sm] >= p.sim.m_sm_floor &&
           std::isfinite(x[ix_m_o2]) && x[ix_m_o2] > 0.0 &&
           std::isfinite(x[ix_m_n2]) && x[ix_m_n2] > 0.0 &&
           std::isfinite(x[ix_p_rm]) && x[ix_p_rm] > 0.0;
}

Vec6 input_gain_vector(const ParameterSet& p) {
    Vec6 g = Vec6::Zero();
    g[ix_omega_cp] = p.auxiliary.eta_cm * p.auxiliary.k_t / (p.auxiliary.J_cp * p.auxiliary.R_cm);
    return g;
}

Vec6 disturbance_gain_vector(const ParameterSet& p) {
    Vec6 phi = Vec6::Zero();
    phi[ix_m_o2] = -p.electrochem.N_cells * p.physical.M_O2 / (4.0 * p.physical.F);
    return phi;
}

}  // namespace pemfc
