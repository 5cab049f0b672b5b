#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "pemfc/config.hpp"
#include "pemfc/types.hpp"

namespace pemfc {

enum class PsatModel { log_quadratic, log_linear };

// Ambient-side and gas-property constants.
struct PhysicalConstants {
    double P_atm = 101325.0;      // Pa
    double phi_atm = 0.5;         // ambient relative humidity
    double P_sat_Tatm = 3140.4;   // saturation pressure at T_atm, Pa
    double gamma = 1.4;           // specific-heat ratio of air
    double C_p = 1004.0;          // specific heat of air, J/kg/K (stored, unused)
    double R_a = 286.9;           // air gas constant, J/kg/K
    double R_O2 = 259.8;          // J/kg/K
    double R_N2 = 296.8;          // J/kg/K
    double R_v = 461.5;           // J/kg/K
    double R_univ = 8.314;        // J/mol/K
    double F = 96485.0;           // C/mol
    double M_a = 28.97e-3;        // kg/mol (humid-air molar mass, humidity-ratio use only)
    double M_O2 = 32e-3;          // kg/mol
    double M_N2 = 28e-3;          // kg/mol
    double M_v = 18.02e-3;        // kg/mol
    double X_O2 = 0.21;           // oxygen mole fraction in dry air
    PsatModel psat_model = PsatModel::log_quadratic;
};

// Compressor, motor, manifold and orifice parameters.
struct AuxiliaryParams {
    double k_t = 0.0153;          // motor torque constant, N*m/A
    double R_cm = 0.82;           // winding resistance, ohm
    double k_v = 0.0153;          // back-EMF constant, V*s/rad
    double eta_cp = 0.8;          // compressor efficiency
    double eta_cm = 0.98;         // motor mechanical efficiency
    double J_cp = 5e-5;           // rotor inertia, kg*m^2
    double V_sm = 0.02;           // supply manifold volume, m^3
    double V_ca = 0.005;          // cathode volume, m^3
    double V_rm = 0.005;          // return manifold volume, m^3
    double K_sm_out = 0.3629e-5;  // supply manifold outlet orifice, kg/s/Pa
    double K_ca_out = 0.2177e-5;  // cathode outlet orifice, kg/s/Pa
    double y_O2_in = 0.21;        // oxygen mole fraction at cathode inlet
    double d_c = 0.2286;          // compressor diameter, m (stored, unused)
};

// Stack voltage model parameters. alpha_ct, i0, R_ohm, m_mt, n_mt are fitted
// calibration values, not table constants.
struct ElectrochemParams {
    int N_cells = 1;
    double delta_G = 237340.0;    // Gibbs free energy magnitude, J/mol
    double n_e = 2.0;             // electrons per reaction
    double alpha_ct = 0.3045;     // charge transfer coefficient (fitted)
    double i0 = 3.1e-4;           // exchange current density, A/cm^2 (fitted)
    double A_eff = 25.0;          // effective cell area, cm^2
    double R_ohm = 0.1486;        // area-specific resistance, ohm*cm^2 (fitted)
    double m_mt = 0.0122;         // mass-transfer voltage amplitude, V (fitted)
    double n_mt = 0.1593;         // mass-transfer exponent coefficient, 1/A (fitted)
};

// Fitted polynomial maps for compressor load torque, compressor flow and
// return-manifold outflow, plus the input scalings applied before evaluation.
struct MapCoefficients {
    // torque map terms: a0, a1*w, a00, a10*w, a20*w^2, a01*p, a11*p*w, a02*p^2
    std::array<double, 8> alpha_tau{0.0, 0.0, 0.0, 0.0, -4.669e-7, 0.0, 2.351e-4, 0.0};
    // flow map terms: b00, b10*p, b20*p^2, b01*w, b11*p*w, b02*w^2
    std::array<double, 6> beta_W{4.83e-5, -5.42e-5, 8.79e-6, 3.49e-7, 3.55e-13, -4.11e-10};
    // return-manifold outflow terms: sum_{i=1..5} pa[i]*p^i (pa[0] unused)
    std::array<double, 6> pa{0.0, -0.2175, 0.1995, 0.0, 0.0, 0.0};
    double speed_scale = 1.0;     // applied to omega_cp before map evaluation
    double pressure_scale = 1e-5; // applied to pressures before map evaluation
};

struct OperatingConditions {
    double T_st = 333.15;              // stack temperature, K
    double T_atm = 298.15;             // ambient temperature, K
    double phi_ca_in = 0.75;           // cathode inlet relative humidity
    double phi_ca = 0.75;              // cathode internal relative humidity
    double P_an = 1.0e5;               // anode hydrogen pressure, Pa (held constant)
    double P_O2_polarization = 1.0e5;  // cathode oxygen pressure for static curves, Pa
};

// Numerical machinery defaults (integrators, steady-state solver).
struct SimConfig {
    std::string method = "rk45-adaptive";  // or "rk4-fixed"
    double dt = 1e-4;             // fixed step, s
    double dt_min = 1e-9;         // adaptive floor, s
    double dt_max = 1.0;          // adaptive cap, s
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;        // scaled by state_scale per component
    double t_end = 35.0;          // default horizon, s
    int record_stride = 1;
    double newton_tol = 1e-10;    // scaled residual norm
    int newton_max_iter = 60;
    std::array<double, 6> state_scale{100.0, 1.1e5, 0.025, 1.2e-3, 3.8e-3, 1.1e5};
    double blowup_factor = 1e6;   // abort when |x_i| exceeds factor*scale_i
    double m_sm_floor = 1e-9;     // kg, division guard for T_sm
};

// Experiment-harness thresholds and sanity bands.
struct HarnessConfig {
    double marginality_threshold = 0.020;  // V, flow-sweep spread bound
    double W_cp_min = 0.0;                 // kg/s
    double W_cp_max = 0.1;                 // kg/s
    double P_sanity_min = 0.3e5;           // Pa
    double P_sanity_max = 3.0e5;           // Pa
    double secant_rel_tol = 1e-9;          // on the flow target
    int secant_max_iter = 60;
};

struct ParameterSet {
    PhysicalConstants physical;
    AuxiliaryParams auxiliary;
    ElectrochemParams electrochem;
    MapCoefficients maps;
    OperatingConditions operating;
    SimConfig sim;
    HarnessConfig harness;
};

// Quantities derived once per (parameters, conditions) pair.
struct DerivedConstants {
    double c1 = 0;        // P_N2 / m_N2, Pa/kg
    double c2 = 0;        // P_O2 / m_O2, Pa/kg
    double c3 = 0;        // cathode vapor mass, kg
    double M_a_atm = 0;   // dry-air molar mass from X_O2, kg/mol
    double y_O2 = 0;      // oxygen mass fraction of dry air
    double y_N2 = 0;      // nitrogen mass fraction of dry air
    double Omega_atm = 0; // ambient humidity ratio
    double P_v_ca = 0;    // cathode vapor partial pressure, Pa
};

ParameterSet default_parameters();

// Load a configuration file: defaults plus overrides from the file. Unknown
// keys (including experiment.*) are a hard error; the result is validated.
ParameterSet load_parameters(const std::filesystem::path& path);
ParameterSet load_parameters_text(const std::string& text);

// Apply entries onto an existing set (layering). Unknown keys throw
// ConfigError; unit annotations, when present, must match the documented unit.
void apply_entries(ParameterSet& p, const std::vector<ConfigEntry>& entries);

// Split a scenario file's entries into experiment.* and parameter entries.
void split_experiment_entries(const std::vector<ConfigEntry>& all,
                              std::vector<ConfigEntry>& params,
                              std::vector<ConfigEntry>& experiment);

// Throws ValidationError naming the offending key.
void validate(const ParameterSet& p);

// Serialize the full set in the config grammar. Values survive a round trip
// bit-exactly. with_comments adds the documentation header per key.
std::string dump_config(const ParameterSet& p, bool with_comments = true);

double saturation_pressure(const PhysicalConstants& phys, double T);

DerivedConstants derived_constants(const ParameterSet& p, const OperatingConditions& oc);

// Parameters plus the derived constants for its operating conditions;
// immutable once built, safe to share across concurrent runs.
struct Model {
    ParameterSet params;
    DerivedConstants dc;
};

Model make_model(const ParameterSet& p);

// Deterministic FNV-1a 64 hash of a string, hex-encoded (run manifests).
std::string fnv1a_hex(const std::string& data);

}  // namespace pemfc
