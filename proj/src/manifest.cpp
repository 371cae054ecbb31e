#include "simfdr/manifest.hpp"

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <string>

#include <json.hpp>

#include "simfdr/error.hpp"
#include "simfdr/version.hpp"

namespace simfdr {

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char byte : bytes) {
        hash ^= byte;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(hash));
    return std::string(buf);
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf);
}

std::string write_manifest(const RunManifest& manifest, const std::string& out_dir) {
    nlohmann::ordered_json doc;
    doc["command"] = manifest.command;
    doc["version"] = kVersion;
    doc["created_utc"] = utc_timestamp();
    doc["config"] = nlohmann::ordered_json::parse(manifest.resolved_config);
    doc["inputs"] = manifest.inputs;
    doc["outputs"] = manifest.outputs;

    const std::string path = out_dir + "/manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write " + path);
    out << doc.dump(2) << "\n";
    if (!out.flush())
        throw DataError("failed writing " + path);
    return path;
}

} // namespace simfdr
