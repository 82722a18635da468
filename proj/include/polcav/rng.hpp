#ifndef POLCAV_RNG_HPP
#define POLCAV_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace polcav {

// Seeded Gaussian stream with an explicit Box-Muller mapping. Avoids
// std::normal_distribution, whose output sequence is implementation-defined,
// so identical seeds give identical streams everywhere.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // in (0, 1]
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace polcav

#endif
