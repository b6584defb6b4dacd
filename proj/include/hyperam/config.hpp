#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hyperam/imaging.hpp"
#include "hyperam/rcnn.hpp"

namespace hyperam {

struct ConfigError : std::runtime_error {
  int line;
  ConfigError(int line_no, const std::string& msg)
      : std::runtime_error(msg), line(line_no) {}
};

enum class ExperimentKind { dynamics, energy_trace, image_recall, verify };

const char* to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::verify;
  std::string preset;
  std::uint64_t seed = 1;
  std::string out_dir = "out";

  NetworkConfig net;
  bool run_sync = true;
  bool run_async = true;

  // dynamics
  std::vector<HVector> memories;
  std::vector<double> alpha_readings;  // one graph set per reading

  // energy trace
  std::size_t n = 100, p = 160;
  std::size_t runs = 1;

  // image recall
  std::vector<Codec> codecs;
  std::vector<double> noise_levels;
  int trials = 30;
  double a_param = 20.0;
  std::size_t image_count = 20, image_width = 32, image_height = 32;
  std::string image_dir;  // optional directory of PGM files

  // verify
  std::string single_check;

  /// Human-readable echo of every resolved knob, one "key = value" line each.
  std::vector<std::string> echo() const;
};

/// Parses the flat key-value format ([section] headers, key = value lines,
/// '#' comments). A `preset` key is applied first; explicit keys override
/// preset values. Throws ConfigError with a line number on any problem.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Bundled experiment presets (paper example memory sets, the energy-trace
/// settings, the image-recall table).
std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

}  // namespace hyperam
