#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hyperam/rcnn.hpp"

namespace hyperam {

struct GrayImage {
  std::size_t width = 0, height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, width * height

  std::size_t pixel_count() const { return pixels.size(); }
  bool operator==(const GrayImage&) const = default;
};

enum class Codec { bipolar8, complex_phase, quaternion_twin, octonion_bits };

const char* to_string(Codec c);
Codec codec_from_string(const std::string& s);

/// Components per encoded vector: 8 per pixel for bipolar8, 1 otherwise.
std::size_t encoded_length(Codec c, std::size_t pixel_count);

HVector encode(const GrayImage& img, Codec codec);

/// Inverts encode; components are snapped to the nearest codomain element
/// first. Throws std::invalid_argument when a component is farther than 0.5
/// from every codomain element.
GrayImage decode(const HVector& v, Codec codec, std::size_t width, std::size_t height);

/// Per pixel round(x + eta), eta ~ N(0, stdev^2), clamped to [0, 255].
GrayImage add_gaussian_noise(const GrayImage& img, double stdev, std::uint64_t seed);

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const GrayImage& img, const std::filesystem::path& path);

std::vector<GrayImage> synthetic_images(std::size_t count, std::size_t width,
                                        std::size_t height, std::uint64_t seed);

/// Network matching a codec at image size width x height with the standard
/// exponential parameterization alpha = a / (N * m), beta = e^{-a}.
NetworkConfig codec_network(Codec codec, std::size_t width, std::size_t height, double a);

struct RecallRow {
  Codec codec;
  UpdateMode mode;
  double noise_stdev = 0.0;
  int trials = 0;
  int successes = 0;
  double rate() const { return trials == 0 ? 0.0 : double(successes) / double(trials); }
};

/// Stores the images, then repeatedly corrupts one of them, runs the
/// network, and counts exact recalls. Deterministic per seed; trials share
/// seeds across codecs, modes, and noise levels so comparisons are paired.
std::vector<RecallRow> recall_experiment(Codec codec, const std::vector<GrayImage>& images,
                                         const std::vector<UpdateMode>& modes,
                                         const std::vector<double>& noise_levels, int trials,
                                         double a, std::uint64_t seed,
                                         std::size_t max_sweeps = 100);

}  // namespace hyperam
