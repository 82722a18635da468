#include "polcav/curvature.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "polcav/constants.hpp"

namespace polcav {

namespace {

constexpr double kFlatThreshold = 1e-12;  // m^-1, quadratic coefficient

std::vector<double> parse_csv_row(const std::string& line, std::size_t line_no) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(cell, &used);
        } catch (const std::exception&) {
            throw FormatError("line " + std::to_string(line_no) + ": bad number '" + cell + "'");
        }
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size())
            throw FormatError("line " + std::to_string(line_no) + ": trailing junk in '" + cell + "'");
        row.push_back(value);
    }
    if (row.empty())
        throw FormatError("line " + std::to_string(line_no) + ": empty data row");
    return row;
}

}  // namespace

double HeightMap::interpolate(double row, double col) const {
    std::size_t r0 = static_cast<std::size_t>(row);
    std::size_t c0 = static_cast<std::size_t>(col);
    if (r0 >= rows - 1) r0 = rows - 2;
    if (c0 >= cols - 1) c0 = cols - 2;
    const double fr = row - static_cast<double>(r0);
    const double fc = col - static_cast<double>(c0);
    const double z00 = at(r0, c0);
    const double z01 = at(r0, c0 + 1);
    const double z10 = at(r0 + 1, c0);
    const double z11 = at(r0 + 1, c0 + 1);
    return z00 * (1 - fr) * (1 - fc) + z01 * (1 - fr) * fc + z10 * fr * (1 - fc) +
           z11 * fr * fc;
}

HeightMap load_height_map(std::istream& in) {
    HeightMap map;
    std::string line;
    std::size_t line_no = 0;
    bool have_pitch = false;
    bool have_origin = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            const std::size_t eq = body.find('=');
            if (eq == std::string::npos)
                throw FormatError("line " + std::to_string(line_no) + ": malformed header");
            std::string key = body.substr(0, eq);
            key.erase(0, key.find_first_not_of(" \t"));
            key.erase(key.find_last_not_of(" \t") + 1);
            const std::string value = body.substr(eq + 1);
            if (key == "pitch_m") {
                try {
                    map.pixel_pitch = std::stod(value);
                } catch (const std::exception&) {
                    throw UnitError("pitch_m header is not a number");
                }
                if (!(map.pixel_pitch > 0.0)) throw UnitError("pitch_m must be > 0");
                have_pitch = true;
            } else if (key == "origin") {
                std::stringstream ss(value);
                char comma = 0;
                if (!(ss >> map.origin_row >> comma >> map.origin_col) || comma != ',')
                    throw FormatError("line " + std::to_string(line_no) + ": bad origin header");
                have_origin = true;
            } else {
                throw FormatError("line " + std::to_string(line_no) + ": unknown header '" +
                                  key + "'");
            }
            continue;
        }
        const std::vector<double> row = parse_csv_row(line, line_no);
        if (map.cols == 0) {
            map.cols = row.size();
        } else if (row.size() != map.cols) {
            throw FormatError("line " + std::to_string(line_no) + ": ragged row (" +
                              std::to_string(row.size()) + " vs " + std::to_string(map.cols) +
                              " columns)");
        }
        map.heights.insert(map.heights.end(), row.begin(), row.end());
        ++map.rows;
    }

    if (!have_pitch) throw UnitError("missing '# pitch_m=' header");
    if (map.rows == 0 || map.cols == 0) throw FormatError("no height rows");
    if (map.rows < 2 || map.cols < 2) throw FormatError("raster needs at least 2x2 cells");
    if (!have_origin) {
        map.origin_row = 0.5 * static_cast<double>(map.rows - 1);
        map.origin_col = 0.5 * static_cast<double>(map.cols - 1);
    }
    if (map.origin_row < 0.0 || map.origin_row > static_cast<double>(map.rows - 1) ||
        map.origin_col < 0.0 || map.origin_col > static_cast<double>(map.cols - 1))
        throw FormatError("origin outside the raster");
    return map;
}

HeightMap load_height_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open height map '" + path + "'");
    return load_height_map(in);
}

std::vector<LinecutSample> radial_linecut(const HeightMap& map, double angle, double r_max,
                                          std::size_t n_samples) {
    if (!(map.pixel_pitch > 0.0)) throw UnitError("height map has no pitch");
    if (!(r_max > 0.0)) throw ValidationError("r_max", "must be > 0");
    if (n_samples < 2) throw ValidationError("n_samples", "need at least 2 samples");

    const double dir_col = std::cos(angle);
    const double dir_row = std::sin(angle);
    std::vector<LinecutSample> cut;
    cut.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double r = r_max * static_cast<double>(i) / static_cast<double>(n_samples - 1);
        const double steps = r / map.pixel_pitch;
        const double row = map.origin_row + steps * dir_row;
        const double col = map.origin_col + steps * dir_col;
        if (row < 0.0 || row > static_cast<double>(map.rows - 1) || col < 0.0 ||
            col > static_cast<double>(map.cols - 1))
            throw OutOfBounds("line-cut leaves the raster at r = " + std::to_string(r));
        cut.push_back({r, map.interpolate(row, col)});
    }
    return cut;
}

double local_roc(const std::vector<LinecutSample>& linecut) {
    if (linecut.size() < 5)
        throw ValidationError("linecut", "need at least 5 samples for the parabola fit");

    // Scaled normal equations for z = a r^2 + b r + c.
    double r_scale = 0.0;
    for (const auto& s : linecut) r_scale = std::max(r_scale, std::abs(s.r));
    if (!(r_scale > 0.0)) throw ValidationError("linecut", "zero radial extent");

    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    double t0 = 0, t1 = 0, t2 = 0;
    for (const auto& s : linecut) {
        const double x = s.r / r_scale;
        const double x2 = x * x;
        s0 += 1.0;
        s1 += x;
        s2 += x2;
        s3 += x2 * x;
        s4 += x2 * x2;
        t0 += s.z;
        t1 += x * s.z;
        t2 += x2 * s.z;
    }
    // Solve the 3x3 system by Cramer's rule; matrix [s4 s3 s2; s3 s2 s1; s2 s1 s0].
    const double det = s4 * (s2 * s0 - s1 * s1) - s3 * (s3 * s0 - s1 * s2) +
                       s2 * (s3 * s1 - s2 * s2);
    if (det == 0.0) throw ValidationError("linecut", "degenerate parabola fit");
    const double det_a = t2 * (s2 * s0 - s1 * s1) - s3 * (t1 * s0 - t0 * s1) +
                         s2 * (t1 * s1 - t0 * s2);
    const double a = det_a / det / (r_scale * r_scale);

    if (std::abs(a) < kFlatThreshold)
        throw FlatSurface("quadratic coefficient below the curvature threshold");
    return 1.0 / (2.0 * a);
}

RocProfile roc_vs_angle(const HeightMap& map, const std::vector<double>& angles, double r_max,
                        std::size_t n_samples) {
    RocProfile profile;
    profile.r_max = r_max;
    profile.entries.reserve(angles.size());
    for (double angle : angles) {
        RocEntry entry;
        entry.angle = std::fmod(angle, kTwoPi);
        if (entry.angle < 0.0) entry.angle += kTwoPi;
        try {
            entry.roc = local_roc(radial_linecut(map, angle, r_max, n_samples));
            entry.ok = true;
        } catch (const Error& e) {
            entry.ok = false;
            entry.note = e.what();
        }
        profile.entries.push_back(entry);
    }
    return profile;
}

void CavityGeometry::validate() const {
    if (!(length > 0.0)) throw ValidationError("length", "must be > 0");
    if (!(wavelength > 0.0)) throw ValidationError("wavelength", "must be > 0");
    if (!(roc_minor > 0.0)) throw ValidationError("roc_minor", "must be > 0");
    if (!(roc_major >= roc_minor)) throw ValidationError("roc_major", "must be >= roc_minor");
}

bool cavity_stable(const CavityGeometry& geom) {
    geom.validate();
    return geom.length < geom.roc_minor;
}

double predict_polarization_splitting(const CavityGeometry& geom, bool require_stable) {
    geom.validate();
    if (require_stable && !cavity_stable(geom))
        throw UnstableCavity("cavity length exceeds the smaller radius of curvature");
    const double pi = kTwoPi / 2.0;
    return geom.wavelength * kSpeedOfLight / (8.0 * pi * pi * geom.length) *
           (1.0 / geom.roc_minor - 1.0 / geom.roc_major);
}

}  // namespace polcav
