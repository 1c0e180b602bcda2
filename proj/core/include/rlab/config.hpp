#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "rlab/schottky.hpp"

namespace rlab {

enum class SurfaceKind { three_funnel, explicit_schottky, integer_schottky };

std::string to_string(SurfaceKind k);
SurfaceKind surface_kind_from_string(const std::string& s);

// Numbers stay decimal strings so integer surfaces round-trip exactly.
struct SurfaceConfig {
    std::string name;
    SurfaceKind kind = SurfaceKind::three_funnel;
    std::vector<std::string> lengths;                    // three_funnel
    std::vector<std::array<std::string, 4>> generators;  // a b c d per generator
    std::vector<std::array<std::string, 2>> disks;       // center radius per letter, explicit only
    int precision_bits = 64;

    bool operator==(const SurfaceConfig&) const = default;
};

SurfaceConfig parse_surface_config(const std::string& text);
SurfaceConfig load_surface_config(const std::filesystem::path& path);
std::string emit_surface_config(const SurfaceConfig& c);

// explicit and integer kinds are validated before they are returned
SchottkySurface build_surface(const SurfaceConfig& c);

// "3f222" and "integer"
SurfaceConfig bundled_config(const std::string& name);

}  // namespace rlab
