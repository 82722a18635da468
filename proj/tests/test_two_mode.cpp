#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "polcav/two_mode.hpp"

using namespace polcav;

namespace {

MechanicalMode paper_mech() {
    MechanicalMode mech;
    mech.omega_m = rad_from_hz(222e3);
    mech.gamma_m = rad_from_hz(19.0);
    mech.effective_mass = 1e-10;
    mech.bath_temperature = 300.0;
    return mech;
}

TwoModeSystem paper_system(double power_h = 2.19e-6, double power_v = 1.85e-6) {
    return make_two_mode_system(rad_from_hz(52e3), rad_from_hz(82.4e3), power_h, power_v,
                                1064e-9, 1.0, rad_from_hz(0.3), paper_mech());
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

}  // namespace

TEST_CASE("combined response is the literal sum of the single-mode terms") {
    const TwoModeSystem sys = paper_system();
    for (double f : {-250e3, -100e3, -10e3, 15e3, 41.2e3, 60e3, 120e3, 290e3}) {
        const double x = rad_from_hz(f);
        const double spring = optical_spring(sys.mode_h_at(x), sys.mech, sys.g0) +
                              optical_spring(sys.mode_v_at(x), sys.mech, sys.g0);
        const double damping = optical_damping(sys.mode_h_at(x), sys.mech, sys.g0) +
                               optical_damping(sys.mode_v_at(x), sys.mech, sys.g0);
        const CombinedResponse r = combined_response(sys, x);
        CHECK(r.delta_omega == doctest::Approx(spring).epsilon(1e-15));
        CHECK(r.gamma_eff == doctest::Approx(damping + sys.mech.gamma_m).epsilon(1e-15));
    }
}

TEST_CASE("the V mode sees the reference detuning shifted by the splitting") {
    const TwoModeSystem sys = paper_system();
    const double x = rad_from_hz(30e3);
    CHECK(sys.mode_h_at(x).detuning == x);
    CHECK(sys.mode_v_at(x).detuning == x - sys.splitting);
}

TEST_CASE("zero-power V mode reduces to the single H mode") {
    const TwoModeSystem sys = paper_system(2.19e-6, 0.0);
    for (double f : {-150e3, -41.2e3, 10e3, 100e3}) {
        const double x = rad_from_hz(f);
        const CombinedResponse r = combined_response(sys, x);
        CHECK(r.delta_omega ==
              doctest::Approx(optical_spring(sys.mode_h_at(x), sys.mech, sys.g0))
                  .epsilon(1e-15));
        CHECK(r.gamma_eff - sys.mech.gamma_m ==
              doctest::Approx(optical_damping(sys.mode_h_at(x), sys.mech, sys.g0))
                  .epsilon(1e-15));
    }
}

TEST_CASE("equal powers cancel exactly at the midpoint") {
    const TwoModeSystem sys = paper_system(2e-6, 2e-6);
    const double mid = 0.5 * sys.splitting;
    const CombinedResponse r = combined_response(sys, mid);
    const double scale =
        std::abs(optical_damping(sys.mode_h_at(mid), sys.mech, sys.g0));
    CHECK(std::abs(r.delta_omega) <= 1e-12 * scale);
    CHECK(r.gamma_eff == doctest::Approx(sys.mech.gamma_m).epsilon(1e-12));

    SUBCASE("and are odd about the midpoint") {
        for (double u_hz : {1e3, 10e3, 25e3, 40e3}) {
            const double u = rad_from_hz(u_hz);
            const double gp = combined_optical_damping(sys, mid + u);
            const double gm = combined_optical_damping(sys, mid - u);
            const double sp = combined_optical_spring(sys, mid + u);
            const double sm = combined_optical_spring(sys, mid - u);
            CHECK(std::abs(gp + gm) <= 1e-12 * std::max(std::abs(gp), scale));
            CHECK(std::abs(sp + sm) <= 1e-12 * std::max(std::abs(sp), scale));
        }
    }
}

TEST_CASE("paper-parameter damping curve: driving next to H, cooling toward V") {
    const TwoModeSystem sys = paper_system();
    CHECK(combined_optical_damping(sys, rad_from_hz(20e3)) < 0.0);   // net drive
    CHECK(combined_optical_damping(sys, rad_from_hz(-60e3)) > 0.0);  // red of both: cool
    CHECK(combined_optical_damping(sys, rad_from_hz(70e3)) < 0.0);
    CHECK(combined_optical_damping(sys, rad_from_hz(1e2)) > 0.0);    // V cooling dominates
}

TEST_CASE("cancellation detuning") {
    SUBCASE("equal powers give exactly half the splitting") {
        const TwoModeSystem sys = paper_system(2e-6, 2e-6);
        CHECK(cancellation_detuning(sys) == 0.5 * sys.splitting);
    }
    SUBCASE("paper powers: a true zero strictly between the centers") {
        const TwoModeSystem sys = paper_system();
        const double root = cancellation_detuning(sys);
        CHECK(root > 0.0);
        CHECK(root < sys.splitting);
        CHECK(std::abs(combined_optical_damping(sys, root)) < 1e-6 * sys.mech.gamma_m);
    }
    SUBCASE("single mode has no interior zero") {
        CHECK_THROWS_AS(cancellation_detuning(paper_system(2.19e-6, 0.0)), NoCancellation);
    }
}

TEST_CASE("sweep") {
    const TwoModeSystem sys = paper_system();

    SUBCASE("empty grid gives an empty result") {
        const SweepResult r = sweep(sys, {});
        CHECK(r.points.empty());
        CHECK(r.unstable_count == 0);
    }
    SUBCASE("grid must be strictly increasing") {
        CHECK_THROWS_AS(sweep(sys, {0.0, 0.0}), ValidationError);
        CHECK_THROWS_AS(sweep(sys, {1.0, -1.0}), ValidationError);
    }
    SUBCASE("single midpoint with equal powers sits at the bath temperature") {
        const TwoModeSystem eq = paper_system(2e-6, 2e-6);
        const SweepResult r = sweep(eq, {0.5 * eq.splitting});
        REQUIRE(r.points.size() == 1);
        CHECK_FALSE(r.points[0].unstable);
        const double n_th = thermal_occupation(eq.mech.bath_temperature, eq.mech.omega_m);
        const double t_bath_model = kHbar * eq.mech.omega_m * n_th / kBoltzmann;
        CHECK(r.points[0].t_eff == doctest::Approx(t_bath_model).epsilon(1e-12));
        // The exact-Bose bath value sits 1.8e-8 below the nominal temperature.
        CHECK(r.points[0].t_eff == doctest::Approx(300.0).epsilon(1e-7));
    }
    SUBCASE("201-point paper sweep") {
        const SweepResult r = sweep(sys, linspace(rad_from_hz(-300e3), rad_from_hz(300e3), 201));
        REQUIRE(r.points.size() == 201);
        CHECK(r.unstable_count == 0);

        // Eq. 2 additivity and the n_eff/t_eff consistency, point by point.
        std::size_t best = 0;
        for (std::size_t i = 0; i < r.points.size(); ++i) {
            const SweepPoint& p = r.points[i];
            const double expected =
                combined_optical_damping(sys, p.detuning_ref) + sys.mech.gamma_m;
            CHECK(p.gamma_eff_total == doctest::Approx(expected).epsilon(1e-12));
            CHECK(p.t_eff == doctest::Approx(kHbar * sys.mech.omega_m * p.n_eff /
                                             kBoltzmann).epsilon(1e-12));
            if (p.t_eff < r.points[best].t_eff) best = i;
        }
        // Minimum effective temperature falls between the V-mode red sideband
        // and the midpoint.
        const double argmin = r.points[best].detuning_ref;
        CHECK(argmin > sys.splitting - sys.mech.omega_m);
        CHECK(argmin < 0.5 * sys.splitting);
    }
    SUBCASE("anti-damping past the threshold is flagged, not fatal") {
        TwoModeSystem hot = make_two_mode_system(rad_from_hz(52e3), rad_from_hz(82.4e3),
                                                 2.19e-6, 1.85e-6, 1064e-9, 1.0,
                                                 rad_from_hz(3.0), paper_mech());
        const SweepResult r =
            sweep(hot, linspace(rad_from_hz(-300e3), rad_from_hz(300e3), 201));
        CHECK(r.unstable_count > 0);
        CHECK(r.unstable_count < r.points.size());
        for (const SweepPoint& p : r.points)
            if (p.unstable) {
                CHECK(std::isnan(p.t_eff));
                CHECK(std::isnan(p.n_eff));
            }
    }
    SUBCASE("far-separated modes reduce to the isolated single-mode curve") {
        TwoModeSystem wide = make_two_mode_system(rad_from_hz(52e3), rad_from_hz(5e9),
                                                  2.19e-6, 1.85e-6, 1064e-9, 1.0,
                                                  rad_from_hz(0.3), paper_mech());
        for (double f : {-250e3, -100e3, 30e3, 222e3}) {
            const double x = rad_from_hz(f);
            const double total = combined_optical_damping(wide, x);
            const double single = optical_damping(wide.mode_h_at(x), wide.mech, wide.g0);
            CHECK(total == doctest::Approx(single).epsilon(1e-2));
        }
    }
}

TEST_CASE("transmission scan") {
    const TwoModeSystem sys = paper_system();
    const std::vector<double> grid = linspace(rad_from_hz(-150e3), rad_from_hz(250e3), 4001);

    SUBCASE("polarizer on H gives a single Lorentzian at the H mode") {
        const auto scan = transmission_scan(sys, grid, 0.0);
        const double half_k2 = 0.25 * sys.mode_h.linewidth * sys.mode_h.linewidth;
        for (const auto& [w, t] : scan)
            CHECK(t == doctest::Approx(half_k2 / (half_k2 + w * w)).epsilon(1e-12));
    }
    SUBCASE("45 degrees gives two equal peaks separated by the splitting") {
        // Scan resolution comparable to a laboratory frequency scan; with
        // kappa / splitting = 0.63 the overlapping tails pull the maxima
        // together by ~1.4 kHz, below this grid step.
        const std::vector<double> coarse =
            linspace(rad_from_hz(-150e3), rad_from_hz(250e3), 201);
        const auto scan = transmission_scan(sys, coarse, kTwoPi / 8.0);
        std::vector<std::size_t> peaks;
        for (std::size_t i = 1; i + 1 < scan.size(); ++i)
            if (scan[i].second > scan[i - 1].second && scan[i].second > scan[i + 1].second)
                peaks.push_back(i);
        REQUIRE(peaks.size() == 2);
        const double sep = scan[peaks[1]].first - scan[peaks[0]].first;
        const double step = coarse[1] - coarse[0];
        CHECK(std::abs(sep - sys.splitting) <= step);
        CHECK(scan[peaks[0]].second == doctest::Approx(scan[peaks[1]].second).epsilon(1e-2));
    }
    SUBCASE("peak separation tracks the splitting for any mixing angle once resolved") {
        // Peak pulling scales as (kappa/splitting)^2; with kappa = splitting/50
        // the maxima sit on the mode centers to within a grid step at any angle.
        TwoModeSystem resolved =
            make_two_mode_system(rad_from_hz(82.4e3 / 50.0), rad_from_hz(82.4e3), 2e-6,
                                 2e-6, 1064e-9, 1.0, rad_from_hz(0.3), paper_mech());
        for (double frac : {0.15, 0.35, 0.65, 0.85}) {
            const auto scan = transmission_scan(resolved, grid, frac * kTwoPi / 4.0);
            std::vector<std::size_t> peaks;
            for (std::size_t i = 1; i + 1 < scan.size(); ++i)
                if (scan[i].second > scan[i - 1].second &&
                    scan[i].second > scan[i + 1].second)
                    peaks.push_back(i);
            REQUIRE(peaks.size() == 2);
            const double sep = scan[peaks[1]].first - scan[peaks[0]].first;
            CHECK(std::abs(sep - resolved.splitting) <= grid[1] - grid[0]);
        }
    }
    SUBCASE("degenerate splitting collapses to one Lorentzian at 45 degrees") {
        TwoModeSystem close = make_two_mode_system(rad_from_hz(52e3), 1e-6, 2e-6, 2e-6,
                                                   1064e-9, 1.0, rad_from_hz(0.3),
                                                   paper_mech());
        const auto scan = transmission_scan(close, grid, kTwoPi / 8.0);
        const double half_k2 = 0.25 * close.mode_h.linewidth * close.mode_h.linewidth;
        for (const auto& [w, t] : scan)
            CHECK(t == doctest::Approx(half_k2 / (half_k2 + w * w)).epsilon(1e-6));
    }
    SUBCASE("angle validated") {
        CHECK_THROWS_AS(transmission_scan(sys, grid, -0.1), ValidationError);
        CHECK_THROWS_AS(transmission_scan(sys, grid, 2.0), ValidationError);
    }
}

TEST_CASE("design feasibility") {
    SUBCASE("target short-cavity design is feasible") {
        const FeasibilityReport r = design_feasibility({});
        CHECK(r.sideband_resolved);
        CHECK(r.cooperativity_ratio == doctest::Approx(4.0718068511).epsilon(1e-6));
        CHECK(r.cooperativity_ratio > 1.0);
        CHECK(r.predicted_splitting_hz == doctest::Approx(415e3).epsilon(1e-12));
    }
    SUBCASE("cold bath sends the ratio to infinity") {
        DesignCandidate c;
        c.temperature = 1e-6;
        const FeasibilityReport r = design_feasibility(c);
        CHECK(r.thermal_occupation < 1e-5);
        CHECK(r.cooperativity_ratio > 1e9);
    }
    SUBCASE("kappa above 4 Omega_m is not sideband resolved") {
        DesignCandidate c;
        c.kappa_hz = 5.0 * c.omega_m_hz;
        CHECK_FALSE(design_feasibility(c).sideband_resolved);
    }
    SUBCASE("splitting scales inversely with the length") {
        DesignCandidate c;
        c.cavity_length = 0.05;
        CHECK(design_feasibility(c).predicted_splitting_hz ==
              doctest::Approx(83e3).epsilon(1e-12));
        c.cavity_length = 0.01;
        CHECK(design_feasibility(c).predicted_splitting_hz ==
              doctest::Approx(5.0 * 83e3).epsilon(1e-12));
    }
}
