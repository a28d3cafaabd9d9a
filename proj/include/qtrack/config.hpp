#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qtrack/harness.hpp"

namespace qtrack {

struct LoadedConfig {
    ExperimentConfig config;
    std::string checksum; // over the exact bytes consumed
};

// Parses the JSON experiment file (schema in README). Throws ConfigError on
// I/O, syntax or schema problems and ValidationError on semantic ones.
LoadedConfig load_config_file(const std::filesystem::path& path);
ExperimentConfig parse_config_json(const std::string& text);

std::uint64_t fnv1a64(std::string_view bytes);

inline constexpr const char* kToolVersion = "qtrack 0.1.0";

// Run manifest written (atomically) to out_dir before any result file.
void write_run_manifest(const std::filesystem::path& out_dir,
                        const std::string& config_checksum,
                        std::uint64_t master_seed,
                        const std::vector<std::string>& outputs);

} // namespace qtrack
