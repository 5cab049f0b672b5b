#include "pemfc/params.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

namespace pemfc {

namespace {

// ln(P_sat) correlations in T. The quadratic passes through
// (298.15 K, 3140.4 Pa), (333.15 K, 19946 Pa), (373.15 K, 101325 Pa);
// the linear one through the first and last anchors.
constexpr double kPsatQuad[3] = {-23.835936751760091, 0.15539949177913584,
                                 -0.00016249027044565824};
constexpr double kPsatLin[2] = {-5.758134928891951, 0.046319773228965459};

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_list(const double* v, size_t n) {
    std::string out;
    for (size_t i = 0; i < n; ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

struct KeyDef {
    std::string key;
    std::string unit;
    std::string doc;
    std::function<std::string(const ParameterSet&)> format;
    std::function<void(ParameterSet&, const ConfigEntry&)> apply;
};

KeyDef dbl(std::string key, std::string unit, std::string doc,
           std::function<double&(ParameterSet&)> ref) {
    KeyDef d;
    d.key = std::move(key);
    d.unit = std::move(unit);
    d.doc = std::move(doc);
    d.format = [ref](const ParameterSet& p) {
        return format_double(ref(const_cast<ParameterSet&>(p)));
    };
    d.apply = [ref](ParameterSet& p, const ConfigEntry& e) { ref(p) = parse_double(e); };
    return d;
}

KeyDef integer(std::string key, std::string unit, std::string doc,
               std::function<int&(ParameterSet&)> ref) {
    KeyDef d;
    d.key = std::move(key);
    d.unit = std::move(unit);
    d.doc = std::move(doc);
    d.format = [ref](const ParameterSet& p) {
        return std::to_string(ref(const_cast<ParameterSet&>(p)));
    };
    d.apply = [ref](ParameterSet& p, const ConfigEntry& e) {
        ref(p) = static_cast<int>(parse_long(e));
    };
    return d;
}

template <size_t N>
KeyDef list(std::string key, std::string unit, std::string doc,
            std::function<std::array<double, N>&(ParameterSet&)> ref) {
    KeyDef d;
    d.key = std::move(key);
    d.unit = std::move(unit);
    d.doc = std::move(doc);
    d.format = [ref](const ParameterSet& p) {
        auto& a = ref(const_cast<ParameterSet&>(p));
        return format_list(a.data(), N);
    };
    d.apply = [ref](ParameterSet& p, const ConfigEntry& e) {
        auto vals = parse_double_list(e);
        if (vals.size() != N)
            throw ConfigError("key `" + e.key + "`: expected " + std::to_string(N) +
                              " values, got " + std::to_string(vals.size()));
        std::copy(vals.begin(), vals.end(), ref(p).begin());
    };
    return d;
}

KeyDef token(std::string key, std::string doc, std::vector<std::string> allowed,
             std::function<std::string&(ParameterSet&)> ref) {
    KeyDef d;
    d.key = std::move(key);
    d.unit = "";
    d.doc = std::move(doc);
    d.format = [ref](const ParameterSet& p) { return ref(const_cast<ParameterSet&>(p)); };
    d.apply = [ref, allowed](ParameterSet& p, const ConfigEntry& e) {
        for (const auto& a : allowed)
            if (e.value == a) {
                ref(p) = e.value;
                return;
            }
        std::string msg = "key `" + e.key + "`: invalid value `" + e.value + "`, expected one of:";
        for (const auto& a : allowed) msg += " " + a;
        throw ConfigError(msg);
    };
    return d;
}

KeyDef psat_key() {
    KeyDef d;
    d.key = "physical.psat_model";
    d.unit = "";
    d.doc = "saturation-pressure correlation: log_quadratic or log_linear";
    d.format = [](const ParameterSet& p) {
        return p.physical.psat_model == PsatModel::log_quadratic ? std::string("log_quadratic")
                                                                 : std::string("log_linear");
    };
    d.apply = [](ParameterSet& p, const ConfigEntry& e) {
        if (e.value == "log_quadratic")
            p.physical.psat_model = PsatModel::log_quadratic;
        else if (e.value == "log_linear")
            p.physical.psat_model = PsatModel::log_linear;
        else
            throw ConfigError("key `" + e.key +
                              "`: invalid value `" + e.value +
                              "`, expected one of: log_quadratic log_linear");
    };
    return d;
}

#define REF(member) [](ParameterSet& p) -> auto& { return p.member; }

const std::vector<KeyDef>& registry() {
    static const std::vector<KeyDef> defs = [] {
        std::vector<KeyDef> r;
        // physical
        r.push_back(dbl("physical.P_atm", "Pa", "atmospheric pressure", REF(physical.P_atm)));
        r.push_back(dbl("physical.phi_atm", "-", "ambient relative humidity", REF(physical.phi_atm)));
        r.push_back(dbl("physical.P_sat_Tatm", "Pa", "saturation pressure at ambient temperature", REF(physical.P_sat_Tatm)));
        r.push_back(dbl("physical.gamma", "-", "specific-heat ratio of air", REF(physical.gamma)));
        r.push_back(dbl("physical.C_p", "J/kg/K", "specific heat of air (stored, unused)", REF(physical.C_p)));
        r.push_back(dbl("physical.R_a", "J/kg/K", "air gas constant", REF(physical.R_a)));
        r.push_back(dbl("physical.R_O2", "J/kg/K", "oxygen gas constant", REF(physical.R_O2)));
        r.push_back(dbl("physical.R_N2", "J/kg/K", "nitrogen gas constant", REF(physical.R_N2)));
        r.push_back(dbl("physical.R_v", "J/kg/K", "vapor gas constant", REF(physical.R_v)));
        r.push_back(dbl("physical.R_univ", "J/mol/K", "universal gas constant", REF(physical.R_univ)));
        r.push_back(dbl("physical.F", "C/mol", "Faraday constant", REF(physical.F)));
        r.push_back(dbl("physical.M_a", "kg/mol", "molar mass of (humid) air, humidity-ratio use only", REF(physical.M_a)));
        r.push_back(dbl("physical.M_O2", "kg/mol", "molar mass of oxygen", REF(physical.M_O2)));
        r.push_back(dbl("physical.M_N2", "kg/mol", "molar mass of nitrogen", REF(physical.M_N2)));
        r.push_back(dbl("physical.M_v", "kg/mol", "molar mass of water vapor", REF(physical.M_v)));
        r.push_back(dbl("physical.X_O2", "-", "oxygen mole fraction in dry air", REF(physical.X_O2)));
        r.push_back(psat_key());
        // auxiliary
        r.push_back(dbl("auxiliary.k_t", "N*m/A", "motor torque constant", REF(auxiliary.k_t)));
        r.push_back(dbl("auxiliary.R_cm", "ohm", "motor winding resistance", REF(auxiliary.R_cm)));
        r.push_back(dbl("auxiliary.k_v", "V*s/rad", "motor back-EMF constant", REF(auxiliary.k_v)));
        r.push_back(dbl("auxiliary.eta_cp", "-", "compressor efficiency", REF(auxiliary.eta_cp)));
        r.push_back(dbl("auxiliary.eta_cm", "-", "motor mechanical efficiency", REF(auxiliary.eta_cm)));
        r.push_back(dbl("auxiliary.J_cp", "kg*m^2", "compressor and motor inertia", REF(auxiliary.J_cp)));
        r.push_back(dbl("auxiliary.V_sm", "m^3", "supply manifold volume", REF(auxiliary.V_sm)));
        r.push_back(dbl("auxiliary.V_ca", "m^3", "cathode volume", REF(auxiliary.V_ca)));
        r.push_back(dbl("auxiliary.V_rm", "m^3", "return manifold volume", REF(auxiliary.V_rm)));
        r.push_back(dbl("auxiliary.K_sm_out", "kg/s/Pa", "supply manifold outlet orifice constant", REF(auxiliary.K_sm_out)));
        r.push_back(dbl("auxiliary.K_ca_out", "kg/s/Pa", "cathode outlet orifice constant", REF(auxiliary.K_ca_out)));
        r.push_back(dbl("auxiliary.y_O2_in", "-", "oxygen mole fraction at cathode inlet", REF(auxiliary.y_O2_in)));
        r.push_back(dbl("auxiliary.d_c", "m", "compressor diameter (stored, unused)", REF(auxiliary.d_c)));
        // electrochem
        r.push_back(integer("electrochem.N_cells", "-", "number of cells in series", REF(electrochem.N_cells)));
        r.push_back(dbl("electrochem.delta_G", "J/mol", "Gibbs free energy magnitude", REF(electrochem.delta_G)));
        r.push_back(dbl("electrochem.n_e", "-", "electrons per reaction", REF(electrochem.n_e)));
        r.push_back(dbl("electrochem.alpha_ct", "-", "charge transfer coefficient (fitted calibration)", REF(electrochem.alpha_ct)));
        r.push_back(dbl("electrochem.i0", "A/cm^2", "exchange current density (fitted calibration)", REF(electrochem.i0)));
        r.push_back(dbl("electrochem.A_eff", "cm^2", "effective cell area", REF(electrochem.A_eff)));
        r.push_back(dbl("electrochem.R_ohm", "ohm*cm^2", "area-specific resistance (fitted calibration)", REF(electrochem.R_ohm)));
        r.push_back(dbl("electrochem.m_mt", "V", "mass-transfer voltage amplitude (fitted calibration)", REF(electrochem.m_mt)));
        r.push_back(dbl("electrochem.n_mt", "1/A", "mass-transfer exponent coefficient (fitted calibration)", REF(electrochem.n_mt)));
        // maps
        r.push_back(list<8>("maps.alpha_tau", "-", "torque map: a0, a1*w, a00, a10*w, a20*w^2, a01*p, a11*p*w, a02*p^2 (fitted)", REF(maps.alpha_tau)));
        r.push_back(list<6>("maps.beta_W", "-", "flow map: b00, b10*p, b20*p^2, b01*w, b11*p*w, b02*w^2", REF(maps.beta_W)));
        r.push_back(list<6>("maps.pa", "-", "return-manifold outflow map, sum of pa_i*p^i for i=1..5; pa_0 unused (fitted)", REF(maps.pa)));
        r.push_back(dbl("maps.speed_scale", "-", "rotor speed multiplier before map evaluation", REF(maps.speed_scale)));
        r.push_back(dbl("maps.pressure_scale", "-", "pressure multiplier before map evaluation", REF(maps.pressure_scale)));
        // operating
        r.push_back(dbl("operating.T_st", "K", "stack temperature", REF(operating.T_st)));
        r.push_back(dbl("operating.T_atm", "K", "ambient temperature", REF(operating.T_atm)));
        r.push_back(dbl("operating.phi_ca_in", "-", "cathode inlet relative humidity", REF(operating.phi_ca_in)));
        r.push_back(dbl("operating.phi_ca", "-", "cathode internal relative humidity", REF(operating.phi_ca)));
        r.push_back(dbl("operating.P_an", "Pa", "anode hydrogen pressure (held constant)", REF(operating.P_an)));
        r.push_back(dbl("operating.P_O2_polarization", "Pa", "cathode oxygen pressure for static polarization curves", REF(operating.P_O2_polarization)));
        // sim
        r.push_back(token("sim.method", "integrator: rk4-fixed or rk45-adaptive",
                          {"rk4-fixed", "rk45-adaptive"}, REF(sim.method)));
        r.push_back(dbl("sim.dt", "s", "fixed-step size", REF(sim.dt)));
        r.push_back(dbl("sim.dt_min", "s", "adaptive minimum step", REF(sim.dt_min)));
        r.push_back(dbl("sim.dt_max", "s", "adaptive maximum step", REF(sim.dt_max)));
        r.push_back(dbl("sim.rel_tol", "-", "adaptive relative tolerance", REF(sim.rel_tol)));
        r.push_back(dbl("sim.abs_tol", "-", "adaptive absolute tolerance, scaled by state_scale", REF(sim.abs_tol)));
        r.push_back(dbl("sim.t_end", "s", "default integration horizon", REF(sim.t_end)));
        r.push_back(integer("sim.record_stride", "-", "record every Nth accepted step", REF(sim.record_stride)));
        r.push_back(dbl("sim.newton_tol", "-", "steady-state scaled residual tolerance", REF(sim.newton_tol)));
        r.push_back(integer("sim.newton_max_iter", "-", "steady-state iteration cap", REF(sim.newton_max_iter)));
        r.push_back(list<6>("sim.state_scale", "-", "nominal state magnitudes for residual/error scaling", REF(sim.state_scale)));
        r.push_back(dbl("sim.blowup_factor", "-", "abort threshold, per component, relative to state_scale", REF(sim.blowup_factor)));
        r.push_back(dbl("sim.m_sm_floor", "kg", "division guard for the supply-manifold temperature", REF(sim.m_sm_floor)));
        // harness
        r.push_back(dbl("harness.marginality_threshold", "V", "flow-sweep pointwise voltage spread bound", REF(harness.marginality_threshold)));
        r.push_back(dbl("harness.W_cp_min", "kg/s", "steady-state sanity band, lower flow bound", REF(harness.W_cp_min)));
        r.push_back(dbl("harness.W_cp_max", "kg/s", "steady-state sanity band, upper flow bound", REF(harness.W_cp_max)));
        r.push_back(dbl("harness.P_sanity_min", "Pa", "steady-state sanity band, lower pressure bound", REF(harness.P_sanity_min)));
        r.push_back(dbl("harness.P_sanity_max", "Pa", "steady-state sanity band, upper pressure bound", REF(harness.P_sanity_max)));
        r.push_back(dbl("harness.secant_rel_tol", "-", "flow-matching secant tolerance", REF(harness.secant_rel_tol)));
        r.push_back(integer("harness.secant_max_iter", "-", "flow-matching secant iteration cap", REF(harness.secant_max_iter)));
        return r;
    }();
    return defs;
}

#undef REF

const KeyDef* find_key(const std::string& key) {
    for (const auto& d : registry())
        if (d.key == key) return &d;
    return nullptr;
}

void require(bool ok, const std::string& key, const std::string& why) {
    if (!ok) throw ValidationError("invalid parameter `" + key + "`: " + why);
}

void check_gas_consistency(const std::string& key, double R_univ, double M, double R_specific) {
    double expected = R_univ / M;
    require(std::abs(expected - R_specific) / R_specific < 0.01, key,
            "inconsistent with R_univ / molar mass (expected about " + format_double(expected) + ")");
}

}  // namespace

ParameterSet default_parameters() { return ParameterSet{}; }

void apply_entries(ParameterSet& p, const std::vector<ConfigEntry>& entries) {
    for (const auto& e : entries) {
        const KeyDef* def = find_key(e.key);
        if (!def) throw ConfigError("unknown configuration key `" + e.key + "`");
        if (!e.unit.empty() && !def->unit.empty() && e.unit != def->unit)
            throw ConfigError("key `" + e.key + "`: unit annotation [" + e.unit +
                              "] does not match documented unit [" + def->unit + "]");
        def->apply(p, e);
    }
}

void split_experiment_entries(const std::vector<ConfigEntry>& all,
                              std::vector<ConfigEntry>& params,
                              std::vector<ConfigEntry>& experiment) {
    for (const auto& e : all) {
        if (e.key.rfind("experiment.", 0) == 0)
            experiment.push_back(e);
        else
            params.push_back(e);
    }
}

ParameterSet load_parameters_text(const std::string& text) {
    ParameterSet p = default_parameters();
    apply_entries(p, parse_config_text(text));
    validate(p);
    return p;
}

ParameterSet load_parameters(const std::filesystem::path& path) {
    ParameterSet p = default_parameters();
    apply_entries(p, parse_config_file(path));
    validate(p);
    return p;
}

void validate(const ParameterSet& p) {
    const auto& ph = p.physical;
    require(ph.P_atm > 0, "physical.P_atm", "must be positive");
    require(ph.phi_atm >= 0 && ph.phi_atm <= 1, "physical.phi_atm", "must lie in [0, 1]");
    require(ph.P_sat_Tatm > 0, "physical.P_sat_Tatm", "must be positive");
    require(ph.gamma > 1, "physical.gamma", "must exceed 1");
    require(ph.C_p > 0, "physical.C_p", "must be positive");
    require(ph.R_a > 0, "physical.R_a", "must be positive");
    require(ph.R_O2 > 0, "physical.R_O2", "must be positive");
    require(ph.R_N2 > 0, "physical.R_N2", "must be positive");
    require(ph.R_v > 0, "physical.R_v", "must be positive");
    require(ph.R_univ > 0, "physical.R_univ", "must be positive");
    require(ph.F > 0, "physical.F", "must be positive");
    require(ph.M_a > 0, "physical.M_a", "must be positive");
    require(ph.M_O2 > 0, "physical.M_O2", "must be positive");
    require(ph.M_N2 > 0, "physical.M_N2", "must be positive");
    require(ph.M_v > 0, "physical.M_v", "must be positive");
    require(ph.X_O2 > 0 && ph.X_O2 < 1, "physical.X_O2", "must lie strictly inside (0, 1)");
    check_gas_consistency("physical.R_O2", ph.R_univ, ph.M_O2, ph.R_O2);
    check_gas_consistency("physical.R_N2", ph.R_univ, ph.M_N2, ph.R_N2);
    check_gas_consistency("physical.R_v", ph.R_univ, ph.M_v, ph.R_v);
    require(ph.phi_atm * ph.P_sat_Tatm < ph.P_atm, "physical.phi_atm",
            "ambient vapor pressure reaches total pressure");

    const auto& a = p.auxiliary;
    require(a.k_t > 0, "auxiliary.k_t", "must be positive");
    require(a.R_cm > 0, "auxiliary.R_cm", "must be positive");
    require(a.k_v > 0, "auxiliary.k_v", "must be positive");
    require(a.eta_cp > 0 && a.eta_cp <= 1, "auxiliary.eta_cp", "must lie in (0, 1]");
    require(a.eta_cm > 0 && a.eta_cm <= 1, "auxiliary.eta_cm", "must lie in (0, 1]");
    require(a.J_cp > 0, "auxiliary.J_cp", "must be positive");
    require(a.V_sm > 0, "auxiliary.V_sm", "must be positive");
    require(a.V_ca > 0, "auxiliary.V_ca", "must be positive");
    require(a.V_rm > 0, "auxiliary.V_rm", "must be positive");
    require(a.K_sm_out > 0, "auxiliary.K_sm_out", "must be positive");
    require(a.K_ca_out > 0, "auxiliary.K_ca_out", "must be positive");
    require(a.y_O2_in > 0, "auxiliary.y_O2_in", "must be positive");
    require(a.d_c > 0, "auxiliary.d_c", "must be positive");

    const auto& e = p.electrochem;
    require(e.N_cells >= 1, "electrochem.N_cells", "must be at least 1");
    require(e.delta_G >= 0, "electrochem.delta_G", "must be nonnegative");
    require(e.n_e > 0, "electrochem.n_e", "must be positive");
    require(e.alpha_ct > 0, "electrochem.alpha_ct", "must be positive");
    require(e.i0 > 0, "electrochem.i0", "must be positive");
    require(e.A_eff > 0, "electrochem.A_eff", "must be positive");
    require(e.R_ohm >= 0, "electrochem.R_ohm", "must be nonnegative");
    require(e.m_mt >= 0, "electrochem.m_mt", "must be nonnegative");

    const auto& m = p.maps;
    require(m.speed_scale > 0, "maps.speed_scale", "must be positive");
    require(m.pressure_scale > 0, "maps.pressure_scale", "must be positive");

    const auto& oc = p.operating;
    require(oc.T_st > 0, "operating.T_st", "must be positive");
    require(oc.T_atm > 0, "operating.T_atm", "must be positive");
    require(oc.phi_ca_in >= 0 && oc.phi_ca_in <= 1, "operating.phi_ca_in", "must lie in [0, 1]");
    require(oc.phi_ca >= 0 && oc.phi_ca <= 1, "operating.phi_ca", "must lie in [0, 1]");
    require(oc.P_an > 0, "operating.P_an", "must be positive");
    require(oc.P_O2_polarization > 0, "operating.P_O2_polarization", "must be positive");

    const auto& s = p.sim;
    require(s.dt > 0, "sim.dt", "must be positive");
    require(s.dt_min > 0, "sim.dt_min", "must be positive");
    require(s.dt_max >= s.dt_min, "sim.dt_max", "must be at least dt_min");
    require(s.rel_tol > 0, "sim.rel_tol", "must be positive");
    require(s.abs_tol > 0, "sim.abs_tol", "must be positive");
    require(s.t_end >= 0, "sim.t_end", "must be nonnegative");
    require(s.record_stride >= 1, "sim.record_stride", "must be at least 1");
    require(s.newton_tol > 0, "sim.newton_tol", "must be positive");
    require(s.newton_max_iter >= 1, "sim.newton_max_iter", "must be at least 1");
    for (double v : s.state_scale)
        require(v > 0, "sim.state_scale", "all components must be positive");
    require(s.blowup_factor > 1, "sim.blowup_factor", "must exceed 1");
    require(s.m_sm_floor > 0, "sim.m_sm_floor", "must be positive");

    const auto& h = p.harness;
    require(h.marginality_threshold > 0, "harness.marginality_threshold", "must be positive");
    require(h.W_cp_min >= 0, "harness.W_cp_min", "must be nonnegative");
    require(h.W_cp_max > h.W_cp_min, "harness.W_cp_max", "must exceed W_cp_min");
    require(h.P_sanity_min > 0, "harness.P_sanity_min", "must be positive");
    require(h.P_sanity_max > h.P_sanity_min, "harness.P_sanity_max", "must exceed P_sanity_min");
    require(h.secant_rel_tol > 0, "harness.secant_rel_tol", "must be positive");
    require(h.secant_max_iter >= 1, "harness.secant_max_iter", "must be at least 1");
}

std::string dump_config(const ParameterSet& p, bool with_comments) {
    std::ostringstream out;
    std::string section;
    for (const auto& d : registry()) {
        std::string sec = d.key.substr(0, d.key.find('.'));
        if (sec != section) {
            if (!section.empty()) out << "\n";
            if (with_comments) out << "# --- " << sec << " ---\n";
            if (with_comments && sec == "maps") {
                out << "# alpha_tau and pa defaults are fitted recalibrations producing a\n"
                       "# consistent operating envelope under the default scaling (speed in\n"
                       "# rad/s, pressure in bar). Legacy coefficient sets, fitted in\n"
                       "# unrecoverable units and not usable with this scaling:\n"
                       "#   alpha_tau: 0,0,0,0.0058,-0.0013,3.25e-6,-2.80e-6,-1.37e-9\n"
                       "#     (duplicate listings elsewhere: a11 = 3.92e-6, a01 = 4.1e-4)\n"
                       "#   pa:        1.248e-3,-1.96e-3,-1.52e-3,-2.12e-3,-27.7e-3,-78e-3\n";
            }
            section = sec;
        }
        if (with_comments) out << "# " << d.doc << "\n";
        out << d.key << " = " << d.format(p);
        if (!d.unit.empty()) out << " [" << d.unit << "]";
        out << "\n";
    }
    return out.str();
}

double saturation_pressure(const PhysicalConstants& phys, double T) {
    if (T <= 0) throw std::domain_error("saturation_pressure: temperature must be positive");
    if (phys.psat_model == PsatModel::log_quadratic)
        return std::exp(kPsatQuad[0] + kPsatQuad[1] * T + kPsatQuad[2] * T * T);
    return std::exp(kPsatLin[0] + kPsatLin[1] * T);
}

DerivedConstants derived_constants(const ParameterSet& p, const OperatingConditions& oc) {
    const auto& ph = p.physical;
    DerivedConstants d;
    d.c2 = ph.R_O2 * oc.T_st / p.auxiliary.V_ca;
    d.c1 = ph.R_N2 * oc.T_st / p.auxiliary.V_ca;
    d.P_v_ca = oc.phi_ca * saturation_pressure(ph, oc.T_st);
    d.c3 = p.auxiliary.V_ca * d.P_v_ca * ph.M_v / (ph.R_univ * oc.T_st);
    d.M_a_atm = ph.X_O2 * ph.M_O2 + (1.0 - ph.X_O2) * ph.M_N2;
    d.y_O2 = ph.X_O2 * ph.M_O2 / d.M_a_atm;
    d.y_N2 = (1.0 - ph.X_O2) * ph.M_N2 / d.M_a_atm;
    double ratio = ph.phi_atm * ph.P_sat_Tatm / ph.P_atm;
    d.Omega_atm = (ph.M_v / ph.M_a) * ratio / (1.0 - ratio);
    return d;
}

Model make_model(const ParameterSet& p) { return Model{p, derived_constants(p, p.operating)}; }

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace pemfc
