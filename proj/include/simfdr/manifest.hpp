#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace simfdr {

// FNV-1a 64-bit digest, hex-encoded; used to fingerprint input files.
std::string fnv1a64_hex(const std::string& bytes);

// Current UTC time, ISO 8601. The only non-reproducible field of a manifest.
std::string utc_timestamp();

// Every CLI run writes a manifest next to its outputs: the subcommand, the
// fully resolved configuration (JSON text supplied by the command), tool
// version, seed/input fingerprints and output names. Re-running a command
// from a manifest reproduces the outputs byte for byte; only the manifest's
// own timestamp differs.
struct RunManifest {
    std::string command;          // "analyze" | "simulate" | "report"
    std::string resolved_config;  // JSON object text
    std::vector<std::string> inputs;   // "path:checksum" entries
    std::vector<std::string> outputs;  // file names relative to out_dir
};

// Serialize and write <out_dir>/manifest.json. Returns the full path.
std::string write_manifest(const RunManifest& manifest, const std::string& out_dir);

} // namespace simfdr
