#ifndef POLCAV_CONFIG_HPP
#define POLCAV_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "polcav/two_mode.hpp"

namespace polcav {

// All frequencies in Hz, powers in W, lengths in m, mass in kg, temperature
// in K. Keys carry no unit suffixes; anything unknown is rejected.
// Defaults mirror the demonstrated 5 cm device; g0 and m_eff are not reported
// for it and carry plausible defaults (0.3 Hz, 100 ng).
struct SystemConfig {
    double kappa = 52e3;        // Hz
    double splitting = 82.4e3;  // Hz
    double power_h = 2.19e-6;   // W
    double power_v = 1.85e-6;   // W
    double wavelength = 1064e-9;
    double eta = 1.0;
    double g0 = 0.3;            // Hz
    double omega_m = 222e3;     // Hz
    double gamma_m = 19.0;      // Hz
    double m_eff = 1e-10;       // kg
    double t_bath = 300.0;      // K
};

struct SweepConfig {
    double start = -300e3;  // Hz
    double stop = 300e3;    // Hz
    double step = 3e3;      // Hz
};

struct SynthesisConfig {
    double noise_fraction = 0.0;
    std::uint64_t seed = 1;
    double offset = 0.0;      // m^2/Hz noise floor
    double detuning = -150e3; // Hz, reference detuning of the synthetic run
    double span = 2e3;        // Hz, grid half-width around the peak
    std::uint64_t points = 4001;
};

struct ThermometryConfig {
    std::optional<double> n;      // forward direction: occupation -> ratio
    std::optional<double> ratio;  // inverse direction: ratio -> occupation
};

struct CurvatureConfig {
    std::string map;               // height-map path
    double r_max = 15e-6;          // m
    double angle_step_deg = 5.0;
};

struct Config {
    SystemConfig system;
    SweepConfig sweep;
    SynthesisConfig synthesis;
    ThermometryConfig thermometry;
    CurvatureConfig curvature;
};

// Strict parse: unknown blocks/keys raise ValidationError naming the key;
// malformed JSON raises ParseError. Values are validated on the way in.
Config parse_config(const std::string& text);
Config load_config_file(const std::string& path);
std::string serialize_config(const Config& cfg);

// Build the physical system at the given laser position.
TwoModeSystem to_system(const SystemConfig& cfg, double detuning_ref_hz = 0.0);
MechanicalMode to_mechanical_mode(const SystemConfig& cfg);

}  // namespace polcav

#endif
