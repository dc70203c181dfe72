#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace specreg::cli {

struct InputFile {
  std::string path;
  std::string sha256;
};

/// Everything needed to repeat a run. Written next to the run's outputs.
struct RunManifest {
  std::string subcommand;
  nlohmann::json config = nlohmann::json::object();
  std::vector<InputFile> inputs;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  int jobs = 1;
  double wall_seconds = 0.0;
};

std::string tool_version();

/// Lowercase hex SHA-256 of the file contents.
std::string sha256_file(const std::filesystem::path& path);

InputFile hash_input(const std::filesystem::path& path);

nlohmann::json to_json(const RunManifest& m);
void write_manifest(const RunManifest& m, const std::filesystem::path& path);

}  // namespace specreg::cli
