#pragma once

#include <string>

#include <json.hpp>

namespace nctefa {

inline constexpr const char* kToolName = "nctefa";
inline constexpr const char* kToolVersion = "0.1.0";

/// Method conventions embedded in every artifact so results stay auditable
/// when alternative conventions are added later.
nlohmann::json conventions_json();

/// Run provenance embedded in every emitted artifact: command, resolved
/// config, and content hashes of the inputs. Reruns with equal manifests
/// produce byte-identical outputs.
struct RunManifest {
    std::string command;
    nlohmann::json config = nlohmann::json::object();
    nlohmann::json inputs = nlohmann::json::object(); // path -> fnv1a64 digest

    void add_input(const std::string& role, const std::string& path);
    nlohmann::json to_json() const;
};

} // namespace nctefa
