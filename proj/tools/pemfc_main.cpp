#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "pemfc/harness.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace pemfc;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Resolved {
    ParameterSet params;
    std::vector<ConfigEntry> experiment_entries;
    std::optional<std::string> config_text;
    std::optional<std::string> scenario_text;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<ConfigEntry> parse_overrides(const std::vector<std::string>& overrides) {
    std::vector<ConfigEntry> out;
    for (const auto& o : overrides) {
        size_t eq = o.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= o.size())
            throw ConfigError("malformed --override `" + o + "`, expected key=value");
        ConfigEntry e;
        e.key = o.substr(0, eq);
        e.value = o.substr(eq + 1);
        out.push_back(std::move(e));
    }
    return out;
}

// Layering: defaults, then --config, then --scenario, then --override.
Resolved resolve(const std::optional<std::string>& config_path,
                 const std::optional<std::string>& scenario_path,
                 const std::vector<std::string>& overrides) {
    Resolved r;
    r.params = default_parameters();
    auto layer = [&](const std::vector<ConfigEntry>& entries) {
        std::vector<ConfigEntry> param_entries, exp_entries;
        split_experiment_entries(entries, param_entries, exp_entries);
        apply_entries(r.params, param_entries);
        r.experiment_entries.insert(r.experiment_entries.end(), exp_entries.begin(),
                                    exp_entries.end());
    };
    if (config_path) {
        r.config_text = read_file(*config_path);
        layer(parse_config_text(*r.config_text));
    }
    if (scenario_path) {
        r.scenario_text = read_file(*scenario_path);
        layer(parse_config_text(*r.scenario_text));
    }
    layer(parse_overrides(overrides));
    validate(r.params);
    return r;
}

std::string value_slug(double value, const std::string& unit) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", value);
    std::string s = buf;
    if (unit != "none") s += unit;
    return s;
}

void write_manifest(const fs::path& out_dir, const std::string& stem,
                    const std::string& subcommand, const Resolved& r,
                    const std::optional<std::string>& config_path,
                    const std::optional<std::string>& scenario_path,
                    const std::vector<std::string>& overrides,
                    const std::vector<fs::path>& outputs) {
    json m;
    m["tool"] = "pemfc";
    m["version"] = kVersion;
    m["subcommand"] = subcommand;
    if (config_path)
        m["config"] = {{"path", *config_path}, {"fnv1a", fnv1a_hex(*r.config_text)}};
    else
        m["config"] = nullptr;
    if (scenario_path)
        m["scenario"] = {{"path", *scenario_path}, {"fnv1a", fnv1a_hex(*r.scenario_text)}};
    else
        m["scenario"] = nullptr;
    m["overrides"] = overrides;
    m["parameters_fnv1a"] = fnv1a_hex(dump_config(r.params, false));
    json outs = json::array();
    for (const auto& p : outputs)
        outs.push_back({{"file", p.filename().string()}, {"fnv1a", fnv1a_hex(read_file(p))}});
    m["outputs"] = outs;

    fs::path path = out_dir / (stem + "_manifest.json");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open manifest output file: " + path.string());
    out << m.dump(2) << "\n";
}

int cmd_polarize(const Resolved& r, const std::optional<std::string>& config_path,
                 const std::optional<std::string>& scenario_path,
                 const std::vector<std::string>& overrides, const fs::path& out_dir,
                 const std::string& subcommand) {
    ExperimentSpec spec = parse_experiment(r.experiment_entries);
    if (spec.kind == ExperimentKind::transient) {
        std::cerr << "error: transient scenarios run via `simulate`\n";
        return 2;
    }
    SweepResult sw = run_sweep(spec, r.params);

    fs::create_directories(out_dir);
    std::vector<fs::path> outputs;
    std::vector<fs::path> csvs;
    for (size_t i = 0; i < sw.curves.size(); ++i) {
        std::string name = spec.output_stem;
        if (sw.curves.size() > 1 || !spec.swept_values.empty())
            name += "_" + value_slug(sw.curves[i].front().sweep_value,
                                     sw.curves[i].front().sweep_unit);
        fs::path csv = out_dir / (name + ".csv");
        emit_csv(sw.curves[i], csv);
        outputs.push_back(csv);
        csvs.push_back(csv);
    }
    fs::path script = out_dir / (spec.output_stem + "_plot.py");
    emit_plot_script(csvs, sw.labels, script);
    outputs.push_back(script);
    write_manifest(out_dir, spec.output_stem, subcommand, r, config_path, scenario_path,
                   overrides, outputs);

    for (const auto& w : sw.warnings) std::cerr << "warning: " << w << "\n";
    std::cerr << "wrote " << outputs.size() + 1 << " files under " << out_dir.string() << "\n";
    return sw.warnings.empty() ? 0 : 1;
}

int cmd_simulate(const Resolved& r, const std::optional<std::string>& config_path,
                 const std::optional<std::string>& scenario_path,
                 const std::vector<std::string>& overrides, const fs::path& out_dir) {
    ExperimentSpec spec = parse_experiment(r.experiment_entries);
    if (spec.kind != ExperimentKind::transient) {
        std::cerr << "error: `simulate` requires a transient scenario\n";
        return 2;
    }
    Model model = make_model(r.params);
    Vec6 guess = default_steady_guess(model, spec.v_cm);
    SteadyStateResult ss =
        find_steady_state(model, guess, spec.v_cm, spec.staircase.front().second);
    if (!ss.converged) {
        std::cerr << "error: initial steady state did not converge (residual "
                  << ss.residual_norm << ")\n";
        return 1;
    }
    Profile profile = staircase_profile(spec.staircase, Schedule::constant(spec.v_cm));
    Trajectory traj = integrate(model, ss.x_star, profile, integrator_config(r.params.sim));

    fs::create_directories(out_dir);
    fs::path csv = out_dir / (spec.output_stem + "_trajectory.csv");
    emit_trajectory_csv(traj, csv);
    write_manifest(out_dir, spec.output_stem, "simulate", r, config_path, scenario_path,
                   overrides, {csv});
    std::cerr << "wrote trajectory with " << traj.samples.size() << " samples ("
              << traj.steps << " steps)\n";
    return 0;
}

int cmd_steady(const Resolved& r, double v_cm, double I_fc) {
    Model model = make_model(r.params);
    Vec6 guess = default_steady_guess(model, v_cm);
    SteadyStateResult ss = find_steady_state(model, guess, v_cm, I_fc);
    DerivedQuantities q;
    state_derivative(ss.x_star, PlantInput{v_cm}, Disturbance{I_fc}, model, &q);
    VoltageBreakdown v = breakdown_for_state(model, ss.x_star, I_fc);

    auto line = [](const char* key, double value, const char* unit) {
        std::printf("%s = %.17g%s%s\n", key, value, *unit ? " " : "", unit);
    };
    std::printf("converged = %d\n", ss.converged ? 1 : 0);
    std::printf("iterations = %d\n", ss.iterations);
    line("residual_norm", ss.residual_norm, "");
    line("omega_cp", ss.x_star[ix_omega_cp], "[rad/s]");
    line("P_sm", ss.x_star[ix_p_sm], "[Pa]");
    line("m_sm", ss.x_star[ix_m_sm], "[kg]");
    line("m_O2", ss.x_star[ix_m_o2], "[kg]");
    line("m_N2", ss.x_star[ix_m_n2], "[kg]");
    line("P_rm", ss.x_star[ix_p_rm], "[Pa]");
    line("W_cp", q.W_cp, "[kg/s]");
    line("P_ca", q.P_ca, "[Pa]");
    line("v_cell", v.v_cell, "[V]");
    line("v_stack", v.v_stack, "[V]");
    return ss.converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pemfc: control-oriented PEM fuel cell system simulator"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    std::optional<std::string> scenario_path;
    std::vector<std::string> overrides;
    std::string out_dir = ".";
    std::string values_csv;
    double v_cm = 4.0, I_fc = 0.0;

    auto add_common = [&](CLI::App* cmd, bool with_out) {
        cmd->add_option("--config", config_path, "parameter configuration file");
        cmd->add_option("--override", overrides, "key=value override (repeatable)");
        if (with_out) cmd->add_option("--out", out_dir, "output directory (default: .)");
    };

    auto* dump = app.add_subcommand("dump-defaults", "print the complete default configuration");
    auto* validate_cmd =
        app.add_subcommand("validate", "validate configuration and print the resolved values");
    add_common(validate_cmd, false);
    validate_cmd->add_option("--scenario", scenario_path, "scenario file");
    auto* steady_cmd = app.add_subcommand("steady", "solve one plant steady state");
    add_common(steady_cmd, false);
    steady_cmd->add_option("--scenario", scenario_path, "scenario file");
    steady_cmd->add_option("--v_cm", v_cm, "compressor motor voltage, V")->required();
    steady_cmd->add_option("--I_fc", I_fc, "stack current, A")->required();
    auto* simulate_cmd = app.add_subcommand("simulate", "integrate a transient scenario");
    add_common(simulate_cmd, true);
    simulate_cmd->add_option("--scenario", scenario_path, "scenario file")->required();
    auto* polarize_cmd =
        app.add_subcommand("polarize", "run a polarization or sweep scenario to CSV");
    add_common(polarize_cmd, true);
    polarize_cmd->add_option("--scenario", scenario_path, "scenario file")->required();
    auto* sweep_cmd =
        app.add_subcommand("sweep", "run a sweep scenario with swept values from the command line");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--scenario", scenario_path, "scenario file")->required();
    sweep_cmd->add_option("--values", values_csv, "comma-separated swept values")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (dump->parsed()) {
            std::fputs(dump_config(default_parameters(), true).c_str(), stdout);
            return 0;
        }
        if (sweep_cmd->parsed())
            overrides.push_back("experiment.swept_values=" + values_csv);
        Resolved r = resolve(config_path, scenario_path, overrides);
        if (validate_cmd->parsed()) {
            if (!r.experiment_entries.empty())
                parse_experiment(r.experiment_entries);  // scenario syntax checked too
            std::fputs(dump_config(r.params, false).c_str(), stdout);
            return 0;
        }
        if (steady_cmd->parsed()) return cmd_steady(r, v_cm, I_fc);
        if (simulate_cmd->parsed())
            return cmd_simulate(r, config_path, scenario_path, overrides, out_dir);
        if (polarize_cmd->parsed())
            return cmd_polarize(r, config_path, scenario_path, overrides, out_dir, "polarize");
        if (sweep_cmd->parsed())
            return cmd_polarize(r, config_path, scenario_path, overrides, out_dir, "sweep");
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const SimulationError& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
