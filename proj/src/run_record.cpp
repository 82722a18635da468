#include "polcav/run_record.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "polcav/errors.hpp"

namespace polcav {

std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string("fnv1a:") + buf;
}

std::string RunRecord::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["config"] = config_json.empty() ? nlohmann::json::object()
                                      : nlohmann::json::parse(config_json);
    j["version"] = version;
    j["seed"] = seed;
    j["output_digest"] = output_digest;
    return j.dump(2) + "\n";
}

void write_run_record(const std::string& output_path, const RunRecord& record) {
    const std::string path = output_path + ".run.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << record.to_json();
}

}  // namespace polcav
