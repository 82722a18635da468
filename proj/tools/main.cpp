#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polcav/config.hpp"
#include "polcav/csv.hpp"
#include "polcav/curvature.hpp"
#include "polcav/global_fit.hpp"
#include "polcav/run_record.hpp"
#include "polcav/spectra.hpp"
#include "polcav/thermometry.hpp"
#include "polcav/two_mode.hpp"

using namespace polcav;
using nlohmann::json;

namespace {

std::string join_argv(int argc, char** argv) {
    std::string cmd;
    for (int i = 0; i < argc; ++i) {
        if (i) cmd += ' ';
        cmd += argv[i];
    }
    return cmd;
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << body;
    if (!out) throw ParseError("write failed for '" + path + "'");
}

// Writes the payload plus the reproducibility sidecar.
void emit(const std::string& path, const std::string& body, const std::string& command,
          const Config& cfg, std::uint64_t seed) {
    write_text_file(path, body);
    RunRecord rec;
    rec.command = command;
    rec.config_json = serialize_config(cfg);
    rec.seed = seed;
    rec.output_digest = fnv1a_digest(body);
    write_run_record(path, rec);
}

std::vector<double> sweep_grid_rad(const SweepConfig& sweep) {
    std::vector<double> grid;
    const long long count =
        static_cast<long long>(std::floor((sweep.stop - sweep.start) / sweep.step + 1.5));
    for (long long i = 0; i < count; ++i) {
        const double f = sweep.start + sweep.step * static_cast<double>(i);
        if (f > sweep.stop + 0.5 * sweep.step) break;
        grid.push_back(rad_from_hz(f));
    }
    return grid;
}

std::string run_sweep(const Config& cfg) {
    const TwoModeSystem sys = to_system(cfg.system);
    const SweepResult result = sweep(sys, sweep_grid_rad(cfg.sweep));
    CsvTable table;
    table.columns = {"detuning_hz", "delta_omega_hz", "gamma_eff_hz", "t_eff_k", "n_eff"};
    for (const SweepPoint& p : result.points)
        table.rows.push_back({hz_from_rad(p.detuning_ref), hz_from_rad(p.delta_omega_total),
                              hz_from_rad(p.gamma_eff_total), p.t_eff, p.n_eff});
    if (result.unstable_count > 0)
        std::cerr << "note: " << result.unstable_count
                  << " grid points are anti-damped past the instability threshold; "
                     "t_eff_k and n_eff are nan there\n";
    return to_csv(table);
}

std::string run_spectrum(const Config& cfg) {
    const TwoModeSystem sys = to_system(cfg.system);
    const double detuning = rad_from_hz(cfg.synthesis.detuning);
    const CombinedResponse resp = combined_response(sys, detuning);
    if (!(resp.gamma_eff > 0.0))
        throw InstabilityError("effective damping <= 0 at the synthesis detuning");
    const double f_center = hz_from_rad(sys.mech.omega_m + resp.delta_omega);
    std::vector<double> grid(cfg.synthesis.points);
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = f_center +
                  cfg.synthesis.span * (2.0 * static_cast<double>(i) /
                                            static_cast<double>(grid.size() - 1) -
                                        1.0);
    const NoiseSpectrum spec =
        synthesize_spectrum(sys, detuning, grid, cfg.synthesis.noise_fraction,
                            cfg.synthesis.seed, cfg.synthesis.offset);
    CsvTable table;
    table.columns = {"freq_hz", "psd_m2_per_hz"};
    for (std::size_t i = 0; i < spec.freq_hz.size(); ++i)
        table.rows.push_back({spec.freq_hz[i], spec.psd[i]});
    return to_csv(table);
}

std::string run_fit_spectrum(const Config& cfg, const std::string& data_path) {
    const CsvTable table = read_csv_file(data_path);
    const std::size_t fcol = column_index(table, "freq_hz");
    const std::size_t pcol = column_index(table, "psd_m2_per_hz");
    NoiseSpectrum spec;
    for (const auto& row : table.rows) {
        spec.freq_hz.push_back(row[fcol]);
        spec.psd.push_back(row[pcol]);
    }
    const LorentzianFit fit = fit_lorentzian(spec);
    const MechanicalMode mech = to_mechanical_mode(cfg.system);
    json j;
    j["center_hz"] = fit.center_hz;
    j["fwhm_hz"] = fit.fwhm_hz;
    j["area_m2"] = fit.area;
    j["offset_m2_per_hz"] = fit.offset;
    j["center_err_hz"] = fit.center_err;
    j["fwhm_err_hz"] = fit.fwhm_err;
    j["area_err_m2"] = fit.area_err;
    j["offset_err_m2_per_hz"] = fit.offset_err;
    j["residual_rms"] = fit.residual_rms;
    j["temperature_k"] = temperature_from_fit(fit, mech);
    return j.dump(2) + "\n";
}

std::string run_global_fit(const Config& cfg, const std::string& data_path,
                           const std::array<double, 4>& init_hz_w) {
    const CsvTable table = read_csv_file(data_path);
    const std::size_t dcol = column_index(table, "detuning_hz");
    const std::size_t wcol = column_index(table, "delta_omega_hz");
    const std::size_t gcol = column_index(table, "gamma_eff_hz");
    std::vector<Observation> obs;
    for (const auto& row : table.rows) {
        if (!std::isfinite(row[wcol]) || !std::isfinite(row[gcol])) continue;
        obs.push_back({rad_from_hz(row[dcol]), rad_from_hz(row[wcol]), rad_from_hz(row[gcol])});
    }
    GlobalFitFixed fixed;
    fixed.mech = to_mechanical_mode(cfg.system);
    fixed.g0 = rad_from_hz(cfg.system.g0);
    fixed.wavelength = cfg.system.wavelength;
    fixed.eta = cfg.system.eta;
    const GlobalFitResult r =
        global_fit(obs, fixed,
                   {rad_from_hz(init_hz_w[0]), rad_from_hz(init_hz_w[1]), init_hz_w[2],
                    init_hz_w[3]});
    json j;
    j["kappa_hz"] = r.kappa_hz;
    j["splitting_hz"] = r.splitting_hz;
    j["power_h_w"] = r.power_h;
    j["power_v_w"] = r.power_v;
    j["kappa_err_hz"] = std::sqrt(r.covariance[0][0]);
    j["splitting_err_hz"] = std::sqrt(r.covariance[1][1]);
    j["power_h_err_w"] = std::sqrt(r.covariance[2][2]);
    j["power_v_err_w"] = std::sqrt(r.covariance[3][3]);
    json cov = json::array();
    for (int i = 0; i < 4; ++i) {
        json row = json::array();
        for (int k = 0; k < 4; ++k) row.push_back(r.covariance[i][k]);
        cov.push_back(row);
    }
    j["covariance"] = cov;
    j["covariance_order"] = {"kappa_hz", "splitting_hz", "power_h_w", "power_v_w"};
    j["residual_rms"] = r.residual_rms;
    j["iterations"] = r.iterations;
    j["points_used"] = obs.size();
    return j.dump(2) + "\n";
}

std::string run_thermometry(const Config& cfg) {
    // The scheme parks the laser midway between the modes.
    const TwoModeSystem sys = to_system(cfg.system, 0.5 * cfg.system.splitting);
    const SidebandWeights w = sideband_weights(sys);

    ThermometryResult result;
    if (cfg.thermometry.ratio) {
        result.ratio_hv = *cfg.thermometry.ratio;
        result.n_est = estimate_phonon_number(result.ratio_hv, w);
    } else {
        const double n = cfg.thermometry.n.value_or(1.0);
        result.ratio_hv = polarization_ratio(w, n);
        result.n_est = estimate_phonon_number(result.ratio_hv, w);
    }
    const DetectorSignal signal = detector_signal_components(w, result.n_est, 1.0);
    result.s_omega = signal.s_omega;
    result.s_2omega = signal.s_2omega;

    json j;
    j["ratio_hv"] = result.ratio_hv;
    j["n_est"] = result.n_est;
    j["s_omega"] = result.s_omega;
    j["s_2omega"] = result.s_2omega;
    j["weights"] = {{"stokes_h", w.stokes_h},
                    {"anti_stokes_h", w.anti_stokes_h},
                    {"stokes_v", w.stokes_v},
                    {"anti_stokes_v", w.anti_stokes_v}};
    return j.dump(2) + "\n";
}

std::string run_curvature(const Config& cfg, const std::string& map_path) {
    const HeightMap map = load_height_map_file(map_path);
    std::vector<double> angles;
    for (double deg = 0.0; deg < 360.0 - 1e-9; deg += cfg.curvature.angle_step_deg)
        angles.push_back(deg * kTwoPi / 360.0);
    const RocProfile profile = roc_vs_angle(map, angles, cfg.curvature.r_max);
    std::size_t failed = 0;
    CsvTable table;
    table.columns = {"angle_deg", "roc_m"};
    for (const RocEntry& e : profile.entries) {
        table.rows.push_back({e.angle * 360.0 / kTwoPi,
                              e.ok ? e.roc : std::numeric_limits<double>::quiet_NaN()});
        if (!e.ok) ++failed;
    }
    if (failed == profile.entries.size())
        throw FlatSurface("no angle produced a usable curvature fit");
    if (failed > 0)
        std::cerr << "note: " << failed << " angles failed to fit; roc_m is nan there\n";
    return to_csv(table);
}

std::string run_ringdown(const std::string& data_path) {
    const CsvTable table = read_csv_file(data_path);
    const std::size_t tcol = column_index(table, "time_s");
    const std::size_t pcol = column_index(table, "power_w");
    std::vector<std::pair<double, double>> series;
    for (const auto& row : table.rows) series.emplace_back(row[tcol], row[pcol]);
    const RingdownFit fit = ringdown_fit(series);
    json j;
    j["kappa_hz"] = fit.kappa_hz;
    j["tau_s"] = fit.tau;
    j["amplitude_w"] = fit.amplitude;
    j["background_w"] = fit.background;
    return j.dump(2) + "\n";
}

std::string run_design(const DesignCandidate& candidate) {
    const FeasibilityReport r = design_feasibility(candidate);
    json j;
    j["photon_number"] = r.photon_number;
    j["cooperativity"] = r.cooperativity;
    j["thermal_occupation"] = r.thermal_occupation;
    j["cooperativity_ratio"] = r.cooperativity_ratio;
    j["sideband_resolved"] = r.sideband_resolved;
    j["predicted_splitting_hz"] = r.predicted_splitting_hz;
    return j.dump(2) + "\n";
}

std::string run_transmission(const Config& cfg, double angle_deg) {
    const TwoModeSystem sys = to_system(cfg.system);
    const auto scan =
        transmission_scan(sys, sweep_grid_rad(cfg.sweep), angle_deg * kTwoPi / 360.0);
    CsvTable table;
    table.columns = {"offset_hz", "transmission"};
    for (const auto& [w, t] : scan) table.rows.push_back({hz_from_rad(w), t});
    return to_csv(table);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polarization-split cavity optomechanics: sweeps, fits, thermometry, "
                 "surface curvature"};
    app.require_subcommand(1);

    std::string config_path, out_path, data_path, map_path;
    double angle_deg = 45.0;
    std::array<double, 4> init{0.0, 0.0, 0.0, 0.0};
    DesignCandidate candidate;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--out", out_path, "output file")->required();
    };

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "detuning sweep: spring, damping, effective temperature");
    add_common(sweep_cmd);

    CLI::App* spectrum_cmd =
        app.add_subcommand("spectrum", "synthesize a displacement noise spectrum");
    add_common(spectrum_cmd);

    CLI::App* fit_spectrum_cmd =
        app.add_subcommand("fit-spectrum", "Lorentzian fit of a spectrum CSV");
    add_common(fit_spectrum_cmd);
    fit_spectrum_cmd->add_option("--data", data_path, "spectrum CSV")->required();

    CLI::App* global_fit_cmd = app.add_subcommand(
        "global-fit", "four-parameter simultaneous fit of a sweep CSV");
    add_common(global_fit_cmd);
    global_fit_cmd->add_option("--data", data_path, "sweep CSV")->required();
    global_fit_cmd->add_option("--init-kappa", init[0], "initial kappa, Hz");
    global_fit_cmd->add_option("--init-splitting", init[1], "initial splitting, Hz");
    global_fit_cmd->add_option("--init-power-h", init[2], "initial H power, W");
    global_fit_cmd->add_option("--init-power-v", init[3], "initial V power, W");

    CLI::App* thermometry_cmd =
        app.add_subcommand("thermometry", "polarization sideband thermometry");
    add_common(thermometry_cmd);

    CLI::App* curvature_cmd =
        app.add_subcommand("curvature", "radius of curvature versus angle from a height map");
    add_common(curvature_cmd);
    curvature_cmd->add_option("--map", map_path, "height-map file (overrides config)");

    CLI::App* ringdown_cmd = app.add_subcommand("ringdown", "exponential ringdown fit");
    add_common(ringdown_cmd);
    ringdown_cmd->add_option("--data", data_path, "time series CSV (time_s, power_w)")
        ->required();

    CLI::App* design_cmd =
        app.add_subcommand("design", "feasibility report for a cavity design");
    add_common(design_cmd);
    design_cmd->add_option("--length-m", candidate.cavity_length, "cavity length, m");
    design_cmd->add_option("--kappa-hz", candidate.kappa_hz, "optical linewidth, Hz");
    design_cmd->add_option("--omega-m-hz", candidate.omega_m_hz, "mechanical frequency, Hz");
    design_cmd->add_option("--q", candidate.quality_factor, "mechanical quality factor");
    design_cmd->add_option("--g0-hz", candidate.g0_hz, "single-photon coupling, Hz");
    design_cmd->add_option("--power-w", candidate.input_power, "input power, W");
    design_cmd->add_option("--temperature-k", candidate.temperature, "bath temperature, K");
    design_cmd->add_option("--wavelength-m", candidate.wavelength, "wavelength, m");

    CLI::App* transmission_cmd =
        app.add_subcommand("transmission", "bare-cavity transmission scan");
    add_common(transmission_cmd);
    transmission_cmd->add_option("--angle-deg", angle_deg, "input polarization angle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const Config cfg =
            config_path.empty() ? parse_config("{}") : load_config_file(config_path);
        const std::string command = join_argv(argc, argv);
        const std::uint64_t seed = cfg.synthesis.seed;

        if (app.got_subcommand(sweep_cmd)) {
            emit(out_path, run_sweep(cfg), command, cfg, seed);
        } else if (app.got_subcommand(spectrum_cmd)) {
            emit(out_path, run_spectrum(cfg), command, cfg, seed);
        } else if (app.got_subcommand(fit_spectrum_cmd)) {
            emit(out_path, run_fit_spectrum(cfg, data_path), command, cfg, seed);
        } else if (app.got_subcommand(global_fit_cmd)) {
            if (init[0] <= 0.0) init[0] = cfg.system.kappa;
            if (init[1] <= 0.0) init[1] = cfg.system.splitting;
            if (init[2] <= 0.0) init[2] = cfg.system.power_h;
            if (init[3] <= 0.0) init[3] = cfg.system.power_v;
            emit(out_path, run_global_fit(cfg, data_path, init), command, cfg, seed);
        } else if (app.got_subcommand(thermometry_cmd)) {
            emit(out_path, run_thermometry(cfg), command, cfg, seed);
        } else if (app.got_subcommand(curvature_cmd)) {
            const std::string path = map_path.empty() ? cfg.curvature.map : map_path;
            if (path.empty())
                throw ValidationError("curvature.map", "no height-map path given");
            emit(out_path, run_curvature(cfg, path), command, cfg, seed);
        } else if (app.got_subcommand(ringdown_cmd)) {
            emit(out_path, run_ringdown(data_path), command, cfg, seed);
        } else if (app.got_subcommand(design_cmd)) {
            emit(out_path, run_design(candidate), command, cfg, seed);
        } else if (app.got_subcommand(transmission_cmd)) {
            emit(out_path, run_transmission(cfg, angle_deg), command, cfg, seed);
        }
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const UnitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
