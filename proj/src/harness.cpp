#include "pemfc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pemfc {

namespace {

ExperimentKind parse_kind(const ConfigEntry& e) {
    if (e.value == "polarization") return ExperimentKind::polarization;
    if (e.value == "flow_sweep") return ExperimentKind::flow_sweep;
    if (e.value == "pressure_sweep") return ExperimentKind::pressure_sweep;
    if (e.value == "temperature_sweep") return ExperimentKind::temperature_sweep;
    if (e.value == "transient") return ExperimentKind::transient;
    throw ConfigError("key `experiment.kind`: invalid value `" + e.value + "`");
}

ExperimentMode parse_mode(const ConfigEntry& e) {
    if (e.value == "static") return ExperimentMode::static_curve;
    if (e.value == "dynamic") return ExperimentMode::dynamic_steady;
    throw ConfigError("key `experiment.mode`: invalid value `" + e.value + "`");
}

std::vector<std::pair<double, double>> parse_staircase(const ConfigEntry& e) {
    std::vector<std::pair<double, double>> out;
    std::istringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("key `experiment.staircase`: expected `duration:current` pairs");
        try {
            out.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
        } catch (const std::exception&) {
            throw ConfigError("key `experiment.staircase`: malformed pair `" + item + "`");
        }
    }
    if (out.empty()) throw ConfigError("key `experiment.staircase`: empty");
    return out;
}

}  // namespace

ExperimentSpec parse_experiment(const std::vector<ConfigEntry>& entries) {
    ExperimentSpec spec;
    for (const auto& e : entries) {
        if (e.key == "experiment.kind") {
            spec.kind = parse_kind(e);
        } else if (e.key == "experiment.mode") {
            spec.mode = parse_mode(e);
        } else if (e.key == "experiment.currents") {
            spec.currents = parse_double_list(e);
        } else if (e.key == "experiment.swept_unit") {
            if (e.value != "bar" && e.value != "K" && e.value != "slpm" && e.value != "kg_s" &&
                e.value != "none")
                throw ConfigError("key `experiment.swept_unit`: invalid value `" + e.value + "`");
            spec.swept_unit = e.value;
        } else if (e.key == "experiment.swept_values") {
            spec.swept_values = parse_double_list(e);
        } else if (e.key == "experiment.v_cm") {
            spec.v_cm = parse_double(e);
        } else if (e.key == "experiment.output_stem") {
            spec.output_stem = e.value;
        } else if (e.key == "experiment.staircase") {
            spec.staircase = parse_staircase(e);
        } else {
            throw ConfigError("unknown configuration key `" + e.key + "`");
        }
    }
    std::sort(spec.currents.begin(), spec.currents.end());
    std::sort(spec.swept_values.begin(), spec.swept_values.end());
    for (double I : spec.currents)
        if (I < 0) throw ConfigError("key `experiment.currents`: currents must be nonnegative");
    if (spec.kind == ExperimentKind::transient) {
        if (spec.staircase.empty())
            throw ConfigError("key `experiment.staircase`: required for transient experiments");
    } else if (spec.currents.empty()) {
        throw ConfigError("key `experiment.currents`: required");
    }
    bool is_sweep = spec.kind == ExperimentKind::flow_sweep ||
                    spec.kind == ExperimentKind::pressure_sweep ||
                    spec.kind == ExperimentKind::temperature_sweep;
    if (is_sweep && spec.swept_values.empty())
        throw ConfigError("key `experiment.swept_values`: required for sweep experiments");
    for (double v : spec.swept_values)
        if (!(v > 0) || !std::isfinite(v))
            throw ConfigError("key `experiment.swept_values`: values must be positive finite");
    return spec;
}

namespace {

bool sanity_check(const Model& model, const Vec6& x, const DerivedQuantities& q) {
    const auto& h = model.params.harness;
    auto pressure_ok = [&](double P) { return P >= h.P_sanity_min && P <= h.P_sanity_max; };
    return q.W_cp >= h.W_cp_min && q.W_cp <= h.W_cp_max && pressure_ok(x[ix_p_sm]) &&
           pressure_ok(x[ix_p_rm]) && pressure_ok(q.P_ca);
}

PolarizationRecord static_record(const ExperimentSpec&, const Model& model, double sweep_value,
                                 const std::string& unit, double I_fc) {
    const auto& oc = model.params.operating;
    PolarizationRecord rec;
    rec.sweep_value = sweep_value;
    rec.sweep_unit = unit;
    rec.I_fc = I_fc;
    rec.v = cell_voltage(model.params.electrochem, model.params.physical, oc.T_st,
                         pa_to_atm(oc.P_an), pa_to_atm(oc.P_O2_polarization), I_fc);
    return rec;
}

// Initial v_cm estimate for a flow target: invert the flow map at the
// operating pressure level, then add the torque-balance voltage.
double estimate_v_cm_for_flow(const Model& model, double W_target) {
    const auto& maps = model.params.maps;
    const auto& aux = model.params.auxiliary;
    double p = maps.pressure_scale * 1.08 * model.params.physical.P_atm;
    double c = maps.beta_W[0] + maps.beta_W[1] * p + maps.beta_W[2] * p * p - W_target;
    double b = maps.beta_W[3] + maps.beta_W[4] * p;
    double a = maps.beta_W[5];
    double omega;
    double disc = b * b - 4.0 * a * c;
    if (a != 0.0 && disc > 0.0) {
        omega = (-b + std::sqrt(disc)) / (2.0 * a);
        if (omega <= 0.0) omega = (-b - std::sqrt(disc)) / (2.0 * a);
    } else {
        omega = b != 0.0 ? -c / b : 10.0;
    }
    omega = std::max(omega, 1.0);
    double tau = load_torque(omega, 1.08 * model.params.physical.P_atm, maps);
    return aux.k_v * omega + tau * aux.R_cm / (aux.eta_cm * aux.k_t);
}

struct FlowMatch {
    SteadyStateResult ss;
    double v_cm = 0;
    bool matched = false;
};

// Secant on v_cm so the steady-state compressor flow hits the target.
FlowMatch match_flow(const Model& model, double I_fc, double W_target, const Vec6& guess) {
    const auto& h = model.params.harness;
    FlowMatch fm;
    auto solve_at = [&](double v, const Vec6& g) {
        SteadyStateResult ss = find_steady_state(model, g, v, I_fc);
        DerivedQuantities q;
        state_derivative(ss.x_star, PlantInput{v}, Disturbance{I_fc}, model, &q);
        return std::make_pair(ss, q.W_cp);
    };

    double v0 = estimate_v_cm_for_flow(model, W_target);
    double v1 = v0 * 1.15 + 0.05;
    auto [ss0, W0] = solve_at(v0, guess);
    auto [ss1, W1] = solve_at(v1, ss0.converged ? ss0.x_star : guess);
    fm.ss = ss1;
    fm.v_cm = v1;
    double tol = h.secant_rel_tol * std::max(W_target, 1e-12);
    for (int it = 0; it < h.secant_max_iter; ++it) {
        if (ss1.converged && std::abs(W1 - W_target) <= tol) {
            fm.matched = true;
            break;
        }
        if (!std::isfinite(W1) || !std::isfinite(W0) || W1 == W0) break;
        double v2 = v1 + (W_target - W1) * (v1 - v0) / (W1 - W0);
        if (!std::isfinite(v2) || v2 <= 0.0) v2 = 0.5 * (v0 + v1);
        auto [ss2, W2] = solve_at(v2, ss1.converged ? ss1.x_star : guess);
        v0 = v1;
        W0 = W1;
        ss1 = ss2;
        W1 = W2;
        v1 = v2;
        fm.ss = ss1;
        fm.v_cm = v1;
    }
    if (fm.ss.converged && std::abs(W1 - W_target) <= tol) fm.matched = true;
    return fm;
}

}  // namespace

std::vector<PolarizationRecord> run_polarization(const ExperimentSpec& spec, const Model& model,
                                                 double sweep_value, const std::string& unit,
                                                 double flow_target_kg_s) {
    std::vector<PolarizationRecord> records;
    records.reserve(spec.currents.size());

    if (spec.mode == ExperimentMode::static_curve) {
        for (double I : spec.currents)
            records.push_back(static_record(spec, model, sweep_value, unit, I));
        return records;
    }

    Vec6 guess = default_steady_guess(model, spec.v_cm);
    for (double I : spec.currents) {
        PolarizationRecord rec;
        rec.sweep_value = sweep_value;
        rec.sweep_unit = unit;
        rec.I_fc = I;
        rec.dynamic_mode = true;

        SteadyStateResult ss;
        if (flow_target_kg_s > 0.0) {
            FlowMatch fm = match_flow(model, I, flow_target_kg_s, guess);
            ss = fm.ss;
            rec.converged = ss.converged && fm.matched;
        } else {
            ss = find_steady_state(model, guess, spec.v_cm, I);
            rec.converged = ss.converged;
        }
        rec.x_star = ss.x_star;
        state_derivative(ss.x_star, PlantInput{spec.v_cm}, Disturbance{I}, model, &rec.q);
        rec.v = breakdown_for_state(model, ss.x_star, I);
        rec.sanity_ok = sanity_check(model, ss.x_star, rec.q);
        if (ss.converged) guess = ss.x_star;
        records.push_back(std::move(rec));
    }
    return records;
}

SweepResult run_sweep(const ExperimentSpec& spec, const ParameterSet& params) {
    SweepResult out;
    std::vector<double> values = spec.swept_values;
    std::string unit = spec.swept_unit;
    if (values.empty()) {
        values.push_back(0.0);
        unit = "none";
    }

    for (double value : values) {
        ParameterSet p = params;
        double flow_target = -1.0;
        switch (spec.kind) {
            case ExperimentKind::pressure_sweep:
                p.operating.P_O2_polarization = unit == "bar" ? value * 1e5 : value;
                break;
            case ExperimentKind::temperature_sweep:
                p.operating.T_st = value;
                break;
            case ExperimentKind::flow_sweep:
                if (spec.mode == ExperimentMode::dynamic_steady)
                    flow_target = unit == "slpm" ? value * kKgPerSecPerSlpm : value;
                break;
            default:
                break;
        }
        validate(p);
        Model model = make_model(p);
        auto curve = run_polarization(spec, model, value, unit, flow_target);
        for (const auto& rec : curve)
            if (!rec.converged)
                out.warnings.push_back("sweep value " + format_csv_double(value) + " " + unit +
                                       ", I_fc = " + format_csv_double(rec.I_fc) +
                                       " A: steady state did not converge");
        out.curves.push_back(std::move(curve));
        out.labels.push_back(format_csv_double(value) + " " + unit);
    }
    return out;
}

std::string format_csv_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void emit_csv(const std::vector<PolarizationRecord>& records, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open CSV output file: " + path.string());

    bool dynamic = !records.empty() && records.front().dynamic_mode;
    out << "sweep_value,sweep_unit,I_fc_A,v_cell_V,E_nernst_V,v_act_V,v_ohm_V,v_conc_V,v_stack_V";
    if (dynamic)
        out << ",omega_cp_rad_s,P_sm_Pa,m_sm_kg,m_O2_kg,m_N2_kg,P_rm_Pa,W_cp_kg_s,P_ca_Pa,"
               "converged_flag";
    out << "\n";

    for (const auto& r : records) {
        out << format_csv_double(r.sweep_value) << "," << r.sweep_unit << ","
            << format_csv_double(r.I_fc) << "," << format_csv_double(r.v.v_cell) << ","
            << format_csv_double(r.v.E_nernst) << "," << format_csv_double(r.v.v_act) << ","
            << format_csv_double(r.v.v_ohm) << "," << format_csv_double(r.v.v_conc) << ","
            << format_csv_double(r.v.v_stack);
        if (dynamic) {
            out << "," << format_csv_double(r.x_star[ix_omega_cp]) << ","
                << format_csv_double(r.x_star[ix_p_sm]) << ","
                << format_csv_double(r.x_star[ix_m_sm]) << ","
                << format_csv_double(r.x_star[ix_m_o2]) << ","
                << format_csv_double(r.x_star[ix_m_n2]) << ","
                << format_csv_double(r.x_star[ix_p_rm]) << "," << format_csv_double(r.q.W_cp)
                << "," << format_csv_double(r.q.P_ca) << "," << (r.converged ? 1 : 0);
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("failed writing CSV output file: " + path.string());
}

void emit_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open CSV output file: " + path.string());
    out << "t_s,v_cm_V,I_fc_A,omega_cp_rad_s,P_sm_Pa,m_sm_kg,m_O2_kg,m_N2_kg,P_rm_Pa,"
           "W_cp_kg_s,W_sm_out_kg_s,W_ca_out_kg_s,W_rm_out_kg_s,P_ca_Pa,P_O2_Pa,P_N2_Pa,"
           "T_cp_K,T_sm_K,v_cell_V,v_stack_V\n";
    for (const auto& s : traj.samples) {
        out << format_csv_double(s.t) << "," << format_csv_double(s.v_cm) << ","
            << format_csv_double(s.I_fc);
        for (int i = 0; i < 6; ++i) out << "," << format_csv_double(s.x[i]);
        out << "," << format_csv_double(s.q.W_cp) << "," << format_csv_double(s.q.W_sm_out) << ","
            << format_csv_double(s.q.W_ca_out) << "," << format_csv_double(s.q.W_rm_out) << ","
            << format_csv_double(s.q.P_ca) << "," << format_csv_double(s.q.P_O2) << ","
            << format_csv_double(s.q.P_N2) << "," << format_csv_double(s.q.T_cp) << ","
            << format_csv_double(s.q.T_sm) << "," << format_csv_double(s.v.v_cell) << ","
            << format_csv_double(s.v.v_stack) << "\n";
    }
    if (!out) throw std::runtime_error("failed writing CSV output file: " + path.string());
}

void emit_plot_script(const std::vector<std::filesystem::path>& csv_paths,
                      const std::vector<std::string>& labels,
                      const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open plot script output file: " + path.string());
    out << "#!/usr/bin/env python3\n"
           "# Polarization curves: cell voltage vs stack current, one series per CSV.\n"
           "import csv\n"
           "import matplotlib\n"
           "matplotlib.use(\"Agg\")\n"
           "import matplotlib.pyplot as plt\n"
           "\n"
           "series = [\n";
    for (size_t i = 0; i < csv_paths.size(); ++i) {
        std::string label = i < labels.size() ? labels[i] : csv_paths[i].filename().string();
        out << "    (\"" << csv_paths[i].filename().string() << "\", \"" << label << "\"),\n";
    }
    out << "]\n"
           "\n"
           "fig, ax = plt.subplots(figsize=(7, 5))\n"
           "for fname, label in series:\n"
           "    with open(fname, newline=\"\") as fh:\n"
           "        rows = list(csv.DictReader(fh))\n"
           "    current = [float(r[\"I_fc_A\"]) for r in rows]\n"
           "    voltage = [float(r[\"v_cell_V\"]) for r in rows]\n"
           "    ax.plot(current, voltage, marker=\"o\", label=label)\n"
           "ax.set_xlabel(\"stack current [A]\")\n"
           "ax.set_ylabel(\"cell voltage [V]\")\n"
           "ax.grid(True, alpha=0.3)\n"
           "ax.legend()\n"
           "fig.tight_layout()\n"
           "fig.savefig(\"" << path.stem().string() << ".png\", dpi=150)\n";
    if (!out) throw std::runtime_error("failed writing plot script: " + path.string());
}

}  // namespace pemfc
