#pragma once

#include "pemfc/params.hpp"
#include "pemfc/types.hpp"

namespace pemfc {

struct PlantInput {
    double v_cm = 0;  // compressor motor voltage, V (control input)
};

struct Disturbance {
    double I_fc = 0;  // stack current, A (measured disturbance)
};

// Clamp and reverse-flow events of one right-hand-side evaluation.
struct FlowFlags {
    bool W_cp_clamped = false;   // raw flow map went negative
    bool W_rm_clamped = false;   // raw outflow map went negative
    bool W_sm_reverse = false;   // supply nozzle flow reversed (transient)
    bool W_ca_reverse = false;   // cathode nozzle flow reversed (transient)

    bool any() const { return W_cp_clamped || W_rm_clamped || W_sm_reverse || W_ca_reverse; }
};

// Every intermediate quantity of one dynamics evaluation; the logging
// contract consumed by the harness CSV writer.
struct DerivedQuantities {
    double tau_cm = 0;        // N*m
    double tau_cp = 0;        // N*m
    double W_cp = 0;          // kg/s
    double T_cp = 0;          // K
    double T_sm = 0;          // K
    double W_sm_out = 0;      // kg/s
    double P_ca = 0;          // Pa
    double P_O2 = 0;          // Pa
    double P_N2 = 0;          // Pa
    double P_v_ca = 0;        // Pa
    double W_O2_in = 0;       // kg/s
    double W_N2_in = 0;       // kg/s
    double W_O2_out = 0;      // kg/s
    double W_N2_out = 0;      // kg/s
    double W_O2_reacted = 0;  // kg/s
    double W_ca_out = 0;      // kg/s
    double W_rm_out = 0;      // kg/s
    double m_ca = 0;          // kg
    FlowFlags flags;
};

// eta_cm * (k_t / R_cm) * (v_cm - k_v * omega)
double motor_torque(double v_cm, double omega_cp, const AuxiliaryParams& aux);

// Load-torque polynomial on scaled inputs, times pi/30.
double load_torque(double omega_cp, double P_sm, const MapCoefficients& maps);

// Flow-map polynomial on scaled inputs, clamped at zero from below.
double compressor_flow(double omega_cp, double P_sm, const MapCoefficients& maps,
                       bool* clamped = nullptr);

// Isentropic exit temperature T_atm + (T_atm/eta_cp)*((P_sm/P_atm)^((g-1)/g) - 1).
double compressor_exit_temperature(double P_sm, const PhysicalConstants& phys,
                                   const AuxiliaryParams& aux, double T_atm);

// Ideal-gas manifold temperature P_sm*V_sm*M_a_atm/(R_univ*m_sm); throws
// below the configured mass floor.
double supply_manifold_temperature(double P_sm, double m_sm, const ParameterSet& p,
                                   const DerivedConstants& dc);

struct CathodePressure {
    double P_ca, P_O2, P_N2;
};

// Dalton sum P_v_ca + c2*m_O2 + c1*m_N2 in the specific-gas-constant form.
CathodePressure cathode_pressure(double m_O2, double m_N2, double P_v_ca,
                                 const DerivedConstants& dc);

struct FlowSplit {
    double W_O2_in, W_N2_in;
};

// Dry-air species split of the supply-manifold outflow, humidity divisor applied.
FlowSplit flow_splits(double W_sm_out, const DerivedConstants& dc);

struct CathodeOutflows {
    double W_ca_out, W_O2_out, W_N2_out;
    bool reverse = false;  // negative total outflow (signed linearized nozzle)
};

CathodeOutflows cathode_outflows(double m_O2, double m_N2, double P_ca, double P_rm,
                                 const DerivedConstants& dc, const AuxiliaryParams& aux);

// M_O2 * N_cells * I_fc / (4 F)
double oxygen_reacted(double I_fc, int N_cells, const PhysicalConstants& phys);

// Outflow polynomial sum_{i=1..5} pa_i * (pressure_scale*P_rm)^i, clamped at
// zero from below.
double return_manifold_outflow(double P_rm, const MapCoefficients& maps,
                               bool* clamped = nullptr);

// The six state derivatives. Optionally fills *q with every intermediate.
Vec6 state_derivative(const Vec6& x, const PlantInput& u, const Disturbance& d,
                      const Model& model, DerivedQuantities* q = nullptr);

// omega >= 0, masses and pressures strictly positive.
bool is_valid_state(const Vec6& x, const ParameterSet& p);

// Constant input-gain vector g of the control-affine form (component 1 only).
Vec6 input_gain_vector(const ParameterSet& p);

// Constant disturbance-gain vector (component 4 only).
Vec6 disturbance_gain_vector(const ParameterSet& p);

}  // namespace pemfc
