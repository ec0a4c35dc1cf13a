#pragma once

#include "sigdet/harness.hpp"

#include <string>
#include <vector>

namespace sigdet {

/// power.csv header, LF line endings, UTF-8.
inline constexpr const char* kPowerCsvHeader = "scenario,statistic,effect,replications,rejections,power,mc_se,seed";

/// Numbers use the shortest round-trip decimal form.
std::string format_power_csv(const PowerReport& report);
PowerReport parse_power_csv(const std::string& text);

std::string read_text_file(const std::string& path);
/// Writes bytes verbatim (binary mode, so LF stays LF).
void write_text_file(const std::string& path, const std::string& content);

std::string sha256_hex(const std::string& bytes);

/// Dot plot of one scenario's rows: statistics down the vertical axis, power
/// along the horizontal, one marker series per effect level. Output depends
/// only on the rows.
std::string render_power_svg(const std::vector<PowerRow>& rows, const std::string& title);

struct ManifestFile {
  std::string name;
  std::string sha256;
};

struct RunManifest {
  std::string source;       // config path or preset name
  std::string config_yaml;  // resolved configuration actually run
  std::uint64_t seed = 0;
  std::string output_dir;
  int threads = 1;
  std::vector<ManifestFile> files;
};

std::string format_manifest(const RunManifest& manifest);

}  // namespace sigdet
