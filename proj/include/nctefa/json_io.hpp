#pragma once

#include <string>

#include <json.hpp>

namespace nctefa {

/// Serializes with floating-point numbers rendered at 17 significant digits
/// so reruns are byte-comparable. Objects are emitted with keys in sorted
/// order (nlohmann's default for json objects).
std::string dump_json_17g(const nlohmann::json& j, int indent_step = 2);

void write_json_file(const nlohmann::json& j, const std::string& path);

nlohmann::json read_json_file(const std::string& path);

/// Reads a whole file; throws DataError if it cannot be opened.
std::string read_file_bytes(const std::string& path);

/// FNV-1a 64-bit content hash, hex encoded. Used for input digests in run
/// manifests (provenance, not security).
std::string fnv1a64_hex(const std::string& bytes);

} // namespace nctefa
