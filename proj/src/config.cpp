#include "polcav/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace polcav {

namespace {

using nlohmann::json;

void require_keys(const json& block, const std::string& block_name,
                  std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : block.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (key == k) {
                known = true;
                break;
            }
        if (!known)
            throw ValidationError(block_name + "." + key, "unknown key (units are fixed by "
                                  "the schema; unit-suffixed keys are rejected)");
    }
}

double get_number(const json& block, const std::string& block_name, const char* key,
                  double fallback) {
    if (!block.contains(key)) return fallback;
    const json& v = block.at(key);
    if (!v.is_number())
        throw ValidationError(block_name + "." + key, "must be a number");
    return v.get<double>();
}

std::uint64_t get_uint(const json& block, const std::string& block_name, const char* key,
                       std::uint64_t fallback) {
    if (!block.contains(key)) return fallback;
    const json& v = block.at(key);
    if (!v.is_number_unsigned() && !v.is_number_integer())
        throw ValidationError(block_name + "." + key, "must be a non-negative integer");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0)
        throw ValidationError(block_name + "." + key, "must be a non-negative integer");
    return v.get<std::uint64_t>();
}

void check(bool ok, const char* key, const char* detail) {
    if (!ok) throw ValidationError(key, detail);
}

void validate_config(const Config& c) {
    check(c.system.kappa > 0, "kappa", "must be > 0");
    check(c.system.splitting > 0, "splitting", "must be > 0");
    check(c.system.power_h >= 0, "power_h", "must be >= 0");
    check(c.system.power_v >= 0, "power_v", "must be >= 0");
    check(c.system.wavelength > 0, "wavelength", "must be > 0");
    check(c.system.eta >= 0 && c.system.eta <= 1, "eta", "must be in [0, 1]");
    check(c.system.g0 >= 0, "g0", "must be >= 0");
    check(c.system.omega_m > 0, "omega_m", "must be > 0");
    check(c.system.gamma_m > 0, "gamma_m", "must be > 0");
    check(c.system.m_eff > 0, "m_eff", "must be > 0");
    check(c.system.t_bath >= 0, "t_bath", "must be >= 0");
    check(c.sweep.step > 0, "step", "must be > 0");
    check(c.sweep.stop > c.sweep.start, "stop", "must be > start");
    check(c.synthesis.noise_fraction >= 0, "noise_fraction", "must be >= 0");
    check(c.synthesis.offset >= 0, "offset", "must be >= 0");
    check(c.synthesis.span > 0, "span", "must be > 0");
    check(c.synthesis.points >= 16, "points", "must be >= 16");
    if (c.thermometry.n) check(*c.thermometry.n >= 0, "n", "must be >= 0");
    if (c.thermometry.ratio) check(*c.thermometry.ratio > 0, "ratio", "must be > 0");
    if (c.thermometry.n && c.thermometry.ratio)
        throw ValidationError("thermometry", "give n or ratio, not both");
    check(c.curvature.r_max > 0, "r_max", "must be > 0");
    check(c.curvature.angle_step_deg > 0, "angle_step_deg", "must be > 0");
}

}  // namespace

Config parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!root.is_object()) throw ParseError("config must be a JSON object");

    require_keys(root, "config", {"system", "sweep", "synthesis", "thermometry", "curvature"});

    Config cfg;
    if (root.contains("system")) {
        const json& b = root.at("system");
        if (!b.is_object()) throw ValidationError("system", "must be an object");
        require_keys(b, "system",
                     {"kappa", "splitting", "power_h", "power_v", "wavelength", "eta", "g0",
                      "omega_m", "gamma_m", "m_eff", "t_bath"});
        auto& s = cfg.system;
        s.kappa = get_number(b, "system", "kappa", s.kappa);
        s.splitting = get_number(b, "system", "splitting", s.splitting);
        s.power_h = get_number(b, "system", "power_h", s.power_h);
        s.power_v = get_number(b, "system", "power_v", s.power_v);
        s.wavelength = get_number(b, "system", "wavelength", s.wavelength);
        s.eta = get_number(b, "system", "eta", s.eta);
        s.g0 = get_number(b, "system", "g0", s.g0);
        s.omega_m = get_number(b, "system", "omega_m", s.omega_m);
        s.gamma_m = get_number(b, "system", "gamma_m", s.gamma_m);
        s.m_eff = get_number(b, "system", "m_eff", s.m_eff);
        s.t_bath = get_number(b, "system", "t_bath", s.t_bath);
    }
    if (root.contains("sweep")) {
        const json& b = root.at("sweep");
        if (!b.is_object()) throw ValidationError("sweep", "must be an object");
        require_keys(b, "sweep", {"start", "stop", "step"});
        cfg.sweep.start = get_number(b, "sweep", "start", cfg.sweep.start);
        cfg.sweep.stop = get_number(b, "sweep", "stop", cfg.sweep.stop);
        cfg.sweep.step = get_number(b, "sweep", "step", cfg.sweep.step);
    }
    if (root.contains("synthesis")) {
        const json& b = root.at("synthesis");
        if (!b.is_object()) throw ValidationError("synthesis", "must be an object");
        require_keys(b, "synthesis",
                     {"noise_fraction", "seed", "offset", "detuning", "span", "points"});
        auto& s = cfg.synthesis;
        s.noise_fraction = get_number(b, "synthesis", "noise_fraction", s.noise_fraction);
        s.seed = get_uint(b, "synthesis", "seed", s.seed);
        s.offset = get_number(b, "synthesis", "offset", s.offset);
        s.detuning = get_number(b, "synthesis", "detuning", s.detuning);
        s.span = get_number(b, "synthesis", "span", s.span);
        s.points = get_uint(b, "synthesis", "points", s.points);
    }
    if (root.contains("thermometry")) {
        const json& b = root.at("thermometry");
        if (!b.is_object()) throw ValidationError("thermometry", "must be an object");
        require_keys(b, "thermometry", {"n", "ratio"});
        if (b.contains("n")) cfg.thermometry.n = get_number(b, "thermometry", "n", 0.0);
        if (b.contains("ratio"))
            cfg.thermometry.ratio = get_number(b, "thermometry", "ratio", 0.0);
    }
    if (root.contains("curvature")) {
        const json& b = root.at("curvature");
        if (!b.is_object()) throw ValidationError("curvature", "must be an object");
        require_keys(b, "curvature", {"map", "r_max", "angle_step_deg"});
        if (b.contains("map")) {
            if (!b.at("map").is_string())
                throw ValidationError("curvature.map", "must be a string path");
            cfg.curvature.map = b.at("map").get<std::string>();
        }
        cfg.curvature.r_max = get_number(b, "curvature", "r_max", cfg.curvature.r_max);
        cfg.curvature.angle_step_deg =
            get_number(b, "curvature", "angle_step_deg", cfg.curvature.angle_step_deg);
    }

    validate_config(cfg);
    return cfg;
}

Config load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const Config& cfg) {
    json root;
    root["system"] = {{"kappa", cfg.system.kappa},
                      {"splitting", cfg.system.splitting},
                      {"power_h", cfg.system.power_h},
                      {"power_v", cfg.system.power_v},
                      {"wavelength", cfg.system.wavelength},
                      {"eta", cfg.system.eta},
                      {"g0", cfg.system.g0},
                      {"omega_m", cfg.system.omega_m},
                      {"gamma_m", cfg.system.gamma_m},
                      {"m_eff", cfg.system.m_eff},
                      {"t_bath", cfg.system.t_bath}};
    root["sweep"] = {{"start", cfg.sweep.start},
                     {"stop", cfg.sweep.stop},
                     {"step", cfg.sweep.step}};
    root["synthesis"] = {{"noise_fraction", cfg.synthesis.noise_fraction},
                         {"seed", cfg.synthesis.seed},
                         {"offset", cfg.synthesis.offset},
                         {"detuning", cfg.synthesis.detuning},
                         {"span", cfg.synthesis.span},
                         {"points", cfg.synthesis.points}};
    json thermo = json::object();
    if (cfg.thermometry.n) thermo["n"] = *cfg.thermometry.n;
    if (cfg.thermometry.ratio) thermo["ratio"] = *cfg.thermometry.ratio;
    root["thermometry"] = thermo;
    root["curvature"] = {{"map", cfg.curvature.map},
                         {"r_max", cfg.curvature.r_max},
                         {"angle_step_deg", cfg.curvature.angle_step_deg}};
    return root.dump(2);
}

TwoModeSystem to_system(const SystemConfig& cfg, double detuning_ref_hz) {
    return make_two_mode_system(rad_from_hz(cfg.kappa), rad_from_hz(cfg.splitting),
                                cfg.power_h, cfg.power_v, cfg.wavelength, cfg.eta,
                                rad_from_hz(cfg.g0), to_mechanical_mode(cfg),
                                rad_from_hz(detuning_ref_hz));
}

MechanicalMode to_mechanical_mode(const SystemConfig& cfg) {
    MechanicalMode mech;
    mech.omega_m = rad_from_hz(cfg.omega_m);
    mech.gamma_m = rad_from_hz(cfg.gamma_m);
    mech.effective_mass = cfg.m_eff;
    mech.bath_temperature = cfg.t_bath;
    return mech;
}

}  // namespace polcav
