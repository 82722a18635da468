#ifndef POLCAV_CURVATURE_HPP
#define POLCAV_CURVATURE_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "polcav/errors.hpp"

namespace polcav {

// Mirror-surface raster in meters. Row-major, rows = slow axis.
// The analysis origin may be fractional (it addresses the interpolated grid).
struct HeightMap {
    std::vector<double> heights;
    std::size_t rows = 0;
    std::size_t cols = 0;
    double pixel_pitch = 0.0;  // m
    double origin_row = 0.0;
    double origin_col = 0.0;

    double at(std::size_t r, std::size_t c) const { return heights[r * cols + c]; }
    // Bilinear interpolation at fractional (row, col); caller keeps indices in range.
    double interpolate(double row, double col) const;
};

// Text format: `# pitch_m=<decimal>` first, optional `# origin=<row>,<col>`,
// then comma-separated height rows in meters.
HeightMap load_height_map(std::istream& in);
HeightMap load_height_map_file(const std::string& path);

struct LinecutSample {
    double r;  // m, distance from the origin
    double z;  // m, interpolated height
};

// n_samples points at uniform radial spacing along the ray from the origin.
// Angle convention: 0 along +columns, pi/2 along +rows.
// Throws OutOfBounds when the ray leaves the raster before r_max.
std::vector<LinecutSample> radial_linecut(const HeightMap& map, double angle, double r_max,
                                          std::size_t n_samples);

// Least-squares parabola z = a r^2 + b r + c; returns 1/(2a), positive for
// concave surfaces. Throws FlatSurface when |a| < 1e-12 m^-1.
double local_roc(const std::vector<LinecutSample>& linecut);

struct RocEntry {
    double angle = 0.0;  // rad, in [0, 2 pi)
    double roc = 0.0;    // m; valid only when ok
    bool ok = false;
    std::string note;    // failure reason when not ok
};

struct RocProfile {
    std::vector<RocEntry> entries;
    double r_max = 0.0;  // m, fit window
};

// local_roc per angle; per-angle failures are flagged, not fatal.
RocProfile roc_vs_angle(const HeightMap& map, const std::vector<double>& angles, double r_max,
                        std::size_t n_samples = 64);

struct CavityGeometry {
    double length = 0.0;      // m
    double wavelength = 0.0;  // m
    double roc_minor = 0.0;   // m, R_a
    double roc_major = 0.0;   // m, R_b >= R_a

    void validate() const;
};

// Plano-concave stability bound against the smaller curvature.
bool cavity_stable(const CavityGeometry& geom);

// Astigmatic polarization splitting of the fundamental mode:
//   dnu = (lambda c / (8 pi^2 L)) (1/R_a - 1/R_b)   [Hz]
// The demonstrated reference device has local ROCs far below its cavity
// length (the second mirror stabilizes it), so the stability bound is only
// enforced when require_stable is set; then L >= R_a throws UnstableCavity.
double predict_polarization_splitting(const CavityGeometry& geom, bool require_stable = false);

}  // namespace polcav

#endif
