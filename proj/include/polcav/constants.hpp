#ifndef POLCAV_CONSTANTS_HPP
#define POLCAV_CONSTANTS_HPP

namespace polcav {

// CODATA 2018 (exact since the 2019 SI redefinition).
inline constexpr double kHbar = 1.054571817e-34;       // J s
inline constexpr double kBoltzmann = 1.380649e-23;     // J / K
inline constexpr double kSpeedOfLight = 299792458.0;   // m / s

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// All I/O is in ordinary frequency (Hz); internals use angular frequency.
constexpr double rad_from_hz(double f_hz) { return kTwoPi * f_hz; }
constexpr double hz_from_rad(double w_rad) { return w_rad / kTwoPi; }

}  // namespace polcav

#endif
