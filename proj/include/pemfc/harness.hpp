#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pemfc/sim.hpp"

namespace pemfc {

enum class ExperimentKind { polarization, flow_sweep, pressure_sweep, temperature_sweep, transient };
enum class ExperimentMode { static_curve, dynamic_steady };

// Declarative description of one experiment, parsed from the experiment.*
// section of a scenario file.
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::polarization;
    ExperimentMode mode = ExperimentMode::static_curve;
    std::vector<double> currents;                       // A, sorted ascending
    std::string swept_unit = "none";                    // bar | K | slpm | kg_s | none
    std::vector<double> swept_values;                   // sorted ascending
    double v_cm = 4.0;                                  // V, dynamic-mode drive
    std::string output_stem = "experiment";
    std::vector<std::pair<double, double>> staircase;   // (duration s, I_fc A)
};

ExperimentSpec parse_experiment(const std::vector<ConfigEntry>& entries);

// One polarization point. Static records carry only the voltage breakdown;
// dynamic records also carry the solved plant state and its derived flows.
struct PolarizationRecord {
    double sweep_value = 0;
    std::string sweep_unit = "none";
    double I_fc = 0;
    VoltageBreakdown v;
    bool dynamic_mode = false;
    Vec6 x_star = Vec6::Zero();
    DerivedQuantities q;
    bool converged = true;
    bool sanity_ok = true;  // steady-state flow/pressure within the sanity bands
};

// One curve: every current in the spec grid at fixed conditions. In dynamic
// mode each point is a plant steady state at that current; for dynamic flow
// sweeps v_cm is adjusted per point by a secant search so the steady-state
// compressor flow matches flow_target_kg_s (pass a negative target when
// unused). Non-converged points are recorded and the run continues.
std::vector<PolarizationRecord> run_polarization(const ExperimentSpec& spec, const Model& model,
                                                 double sweep_value, const std::string& unit,
                                                 double flow_target_kg_s = -1.0);

struct SweepResult {
    std::vector<std::vector<PolarizationRecord>> curves;  // one per swept value
    std::vector<std::string> labels;                      // "<value> <unit>"
    std::vector<std::string> warnings;                    // non-converged points
};

// Runs run_polarization once per swept value with the corresponding
// condition override (pressure in bar, temperature in K, flow in slpm or
// kg/s). Temperature overrides re-derive the saturation pressure and the
// cathode vapor mass.
SweepResult run_sweep(const ExperimentSpec& spec, const ParameterSet& params);

// Fixed column order; floats at 17 significant digits; byte-deterministic.
void emit_csv(const std::vector<PolarizationRecord>& records, const std::filesystem::path& path);

// Self-contained plotting script (voltage vs current, one series per CSV).
void emit_plot_script(const std::vector<std::filesystem::path>& csv_paths,
                      const std::vector<std::string>& labels,
                      const std::filesystem::path& path);

// Trajectory CSV for transient runs (states, flows, voltages per sample).
void emit_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

std::string format_csv_double(double v);

}  // namespace pemfc
