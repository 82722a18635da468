#ifndef POLCAV_RUN_RECORD_HPP
#define POLCAV_RUN_RECORD_HPP

#include <cstdint>
#include <string>

namespace polcav {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a 64-bit over the output bytes; hex string. Stable across runs so
// identical (config, seed, version) give identical sidecars.
std::string fnv1a_digest(const std::string& bytes);

// Reproducibility sidecar written next to every output file.
struct RunRecord {
    std::string command;          // reconstructed argv
    std::string config_json;      // config snapshot (serialized)
    std::string version = kToolVersion;
    std::uint64_t seed = 0;
    std::string output_digest;    // digest of the primary output file

    std::string to_json() const;
};

void write_run_record(const std::string& output_path, const RunRecord& record);

}  // namespace polcav

#endif
