#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "rlab/zeros.hpp"

namespace rlab {

// write to a temporary file next to `path`, then rename over it
void write_atomic(const std::filesystem::path& path, const std::string& content);

// `path` plus `path`.json holding `sidecar`
void write_with_sidecar(const std::filesystem::path& path, const std::string& content, const nlohmann::json& sidecar);

std::string read_file(const std::filesystem::path& path);

// re,im,multiplicity rows with 17 significant digits
std::string resonance_csv(const ResonanceSet& rs);
nlohmann::json resonance_sidecar(const ResonanceSet& rs);
// inverse of the two above
ResonanceSet read_resonances(const std::string& csv, const nlohmann::json& sidecar);

std::string dump(const nlohmann::json& j);

}  // namespace rlab
