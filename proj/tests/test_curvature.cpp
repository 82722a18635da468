#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "polcav/curvature.hpp"
#include "polcav/constants.hpp"

using namespace polcav;

namespace {

// Square raster of z = x^2 / (2 R_x) + y^2 / (2 R_y) centered on the origin.
HeightMap quadratic_map(double r_x, double r_y, std::size_t n = 81, double pitch = 0.5e-6) {
    HeightMap map;
    map.rows = n;
    map.cols = n;
    map.pixel_pitch = pitch;
    map.origin_row = 0.5 * (n - 1);
    map.origin_col = 0.5 * (n - 1);
    map.heights.resize(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const double x = (static_cast<double>(c) - map.origin_col) * pitch;
            const double y = (static_cast<double>(r) - map.origin_row) * pitch;
            map.heights[r * n + c] = x * x / (2.0 * r_x) + y * y / (2.0 * r_y);
        }
    return map;
}

std::string small_map_text() {
    return "# pitch_m=1e-6\n"
           "0.0,1.0,2.0\n"
           "3.0,4.0,5.0\n"
           "6.0,7.0,8.0\n";
}

}  // namespace

TEST_CASE("height map loading") {
    SUBCASE("3x3 grid with pitch parses to nine heights") {
        std::istringstream in(small_map_text());
        const HeightMap map = load_height_map(in);
        CHECK(map.rows == 3);
        CHECK(map.cols == 3);
        CHECK(map.pixel_pitch == 1e-6);
        CHECK(map.at(1, 2) == 5.0);
        CHECK(map.origin_row == 1.0);  // defaults to the raster center
        CHECK(map.origin_col == 1.0);
    }
    SUBCASE("explicit origin header") {
        std::istringstream in("# pitch_m=1e-6\n# origin=0,2\n0,1,2\n3,4,5\n");
        const HeightMap map = load_height_map(in);
        CHECK(map.origin_row == 0.0);
        CHECK(map.origin_col == 2.0);
    }
    SUBCASE("missing pitch header is a unit error") {
        std::istringstream in("0,1,2\n3,4,5\n");
        CHECK_THROWS_AS(load_height_map(in), UnitError);
    }
    SUBCASE("ragged rows are a format error") {
        std::istringstream in("# pitch_m=1e-6\n0,1,2\n3,4\n");
        CHECK_THROWS_AS(load_height_map(in), FormatError);
    }
    SUBCASE("bad numbers are a format error") {
        std::istringstream in("# pitch_m=1e-6\n0,abc,2\n3,4,5\n");
        CHECK_THROWS_AS(load_height_map(in), FormatError);
    }
    SUBCASE("unknown header key is a format error") {
        std::istringstream in("# pitch_m=1e-6\n# pitch_khz=4\n0,1\n2,3\n");
        CHECK_THROWS_AS(load_height_map(in), FormatError);
    }
    SUBCASE("non-positive pitch is a unit error") {
        std::istringstream in("# pitch_m=0\n0,1\n2,3\n");
        CHECK_THROWS_AS(load_height_map(in), UnitError);
    }
}

TEST_CASE("radial linecut") {
    SUBCASE("flat map is flat along any ray") {
        HeightMap flat = quadratic_map(1e30, 1e30);
        for (auto& h : flat.heights) h = 7e-9;
        const auto cut = radial_linecut(flat, 1.113, 15e-6, 32);
        REQUIRE(cut.size() == 32);
        for (const auto& s : cut) CHECK(s.z == doctest::Approx(7e-9).epsilon(1e-12));
        CHECK(cut.front().r == 0.0);
        CHECK(cut.back().r == doctest::Approx(15e-6).epsilon(1e-15));
    }
    SUBCASE("paraboloid sampled along any angle matches r^2 / 2R") {
        const double roc = 1e-3;
        const double pitch = 0.5e-6, r_max = 15e-6;
        const HeightMap map = quadratic_map(roc, roc, 81, pitch);
        const double z_max = r_max * r_max / (2.0 * roc);
        const double bound = (pitch / r_max) * (pitch / r_max) * z_max;
        for (double angle : {0.0, 0.37, kTwoPi / 8, kTwoPi / 3}) {
            const auto cut = radial_linecut(map, angle, r_max, 64);
            for (const auto& s : cut) {
                const double expected = s.r * s.r / (2.0 * roc);
                CHECK(std::abs(s.z - expected) <= bound);
            }
        }
    }
    SUBCASE("ray leaving the raster is out of bounds") {
        const HeightMap map = quadratic_map(1e-3, 1e-3);  // half-width 20 um
        CHECK_THROWS_AS(radial_linecut(map, 0.0, 30e-6, 32), OutOfBounds);
    }
}

TEST_CASE("local radius of curvature") {
    SUBCASE("exact on a noiseless parabola") {
        const HeightMap map = quadratic_map(1e-3, 1e-3);
        const double roc = local_roc(radial_linecut(map, 0.2, 15e-6, 64));
        CHECK(roc == doctest::Approx(1e-3).epsilon(1e-3));
    }
    SUBCASE("astigmatic surface: principal axes read 1 mm and 4 mm") {
        const HeightMap map = quadratic_map(1e-3, 4e-3);
        CHECK(local_roc(radial_linecut(map, 0.0, 15e-6, 64)) ==
              doctest::Approx(1e-3).epsilon(1e-3));
        CHECK(local_roc(radial_linecut(map, kTwoPi / 4, 15e-6, 64)) ==
              doctest::Approx(4e-3).epsilon(1e-3));
    }
    SUBCASE("flat surface detected") {
        HeightMap flat = quadratic_map(1e30, 1e30);
        for (auto& h : flat.heights) h = 0.0;
        CHECK_THROWS_AS(local_roc(radial_linecut(flat, 0.0, 15e-6, 64)), FlatSurface);
    }
    SUBCASE("needs at least five samples") {
        const HeightMap map = quadratic_map(1e-3, 1e-3);
        CHECK_THROWS_AS(local_roc(radial_linecut(map, 0.0, 15e-6, 4)), ValidationError);
    }
    SUBCASE("convex surfaces come out negative") {
        const HeightMap map = quadratic_map(-1e-3, -1e-3);
        CHECK(local_roc(radial_linecut(map, 0.0, 15e-6, 64)) ==
              doctest::Approx(-1e-3).epsilon(1e-3));
    }
}

TEST_CASE("roc versus angle") {
    const double r_a = 1e-3, r_b = 4e-3;
    const HeightMap map = quadratic_map(r_a, r_b);

    SUBCASE("matches the sectional-curvature closed form at every angle") {
        std::vector<double> angles;
        for (int i = 0; i < 72; ++i) angles.push_back(kTwoPi * i / 72.0);
        const RocProfile profile = roc_vs_angle(map, angles, 15e-6);
        REQUIRE(profile.entries.size() == 72);
        for (const auto& e : profile.entries) {
            REQUIRE(e.ok);
            const double c = std::cos(e.angle), s = std::sin(e.angle);
            const double expected = 1.0 / (c * c / r_a + s * s / r_b);
            CHECK(e.roc == doctest::Approx(expected).epsilon(5e-3));
        }
    }
    SUBCASE("two-fold symmetry and the 45-degree value") {
        const RocProfile profile =
            roc_vs_angle(map, {0.0, kTwoPi / 8, kTwoPi / 4, kTwoPi / 2, 5 * kTwoPi / 8,
                               3 * kTwoPi / 4},
                         15e-6);
        REQUIRE(profile.entries.size() == 6);
        CHECK(profile.entries[0].roc ==
              doctest::Approx(profile.entries[3].roc).epsilon(1e-3));  // 0 vs 180
        CHECK(profile.entries[1].roc ==
              doctest::Approx(profile.entries[4].roc).epsilon(1e-3));  // 45 vs 225
        CHECK(profile.entries[2].roc ==
              doctest::Approx(profile.entries[5].roc).epsilon(1e-3));  // 90 vs 270
        // 1 / (0.5/R_a + 0.5/R_b) = 1.6 mm
        CHECK(profile.entries[1].roc == doctest::Approx(1.6e-3).epsilon(5e-3));
    }
    SUBCASE("per-angle failures are flagged, not fatal") {
        HeightMap flat = quadratic_map(1e30, 1e30);
        for (auto& h : flat.heights) h = 0.0;
        const RocProfile profile = roc_vs_angle(flat, {0.0, 1.0}, 15e-6);
        REQUIRE(profile.entries.size() == 2);
        CHECK_FALSE(profile.entries[0].ok);
        CHECK_FALSE(profile.entries[1].ok);
        CHECK(!profile.entries[0].note.empty());
    }
}

TEST_CASE("polarization splitting prediction") {
    const CavityGeometry paper_geom{0.05, 1064e-9, 1e-3, 4e-3};

    SUBCASE("paper geometry lands on 60.6 kHz") {
        const double dv = predict_polarization_splitting(paper_geom);
        CHECK(dv == doctest::Approx(60598.776749753655).epsilon(1e-12));
        CHECK(dv == doctest::Approx(60.6e3).epsilon(2e-3));
    }
    SUBCASE("equal curvatures produce no splitting") {
        CHECK(predict_polarization_splitting({0.05, 1064e-9, 2e-3, 2e-3}) == 0.0);
    }
    SUBCASE("splitting scales inversely with the cavity length") {
        const double dv1 = predict_polarization_splitting(paper_geom);
        CavityGeometry shorter = paper_geom;
        shorter.length = paper_geom.length / 5.0;
        const double dv5 = predict_polarization_splitting(shorter);
        CHECK(dv5 == doctest::Approx(5.0 * dv1).epsilon(1e-12));
    }
    SUBCASE("homogeneous under uniform scaling of all lengths") {
        // dnu ~ 1/(L R): scaling L, R_a, R_b together by s scales the
        // splitting by 1/s^2 at fixed wavelength.
        CavityGeometry scaled = paper_geom;
        const double s = 3.0;
        scaled.length *= s;
        scaled.roc_minor *= s;
        scaled.roc_major *= s;
        CHECK(predict_polarization_splitting(scaled) ==
              doctest::Approx(predict_polarization_splitting(paper_geom) / (s * s))
                  .epsilon(1e-12));
    }
    SUBCASE("stability bound enforced only on request") {
        CHECK(cavity_stable(paper_geom) == false);
        CHECK_NOTHROW(predict_polarization_splitting(paper_geom));
        CHECK_THROWS_AS(predict_polarization_splitting(paper_geom, true), UnstableCavity);
        const CavityGeometry micro{0.5e-3, 1064e-9, 1e-3, 4e-3};
        CHECK(cavity_stable(micro));
        CHECK_NOTHROW(predict_polarization_splitting(micro, true));
    }
    SUBCASE("geometry invariants") {
        CHECK_THROWS_AS(predict_polarization_splitting({0.05, 1064e-9, 4e-3, 1e-3}),
                        ValidationError);
        CHECK_THROWS_AS(predict_polarization_splitting({0.0, 1064e-9, 1e-3, 4e-3}),
                        ValidationError);
    }
}
