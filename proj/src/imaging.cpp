#include "hyperam/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

namespace hyperam {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// b1 is the least-significant bit of the byte.
inline int bit(std::uint8_t byte, int j) { return (byte >> j) & 1; }

// Nearest phase-table index for a point (x, y); distance is Euclidean in
// coefficient space. Returns false when farther than 0.5 from every element.
bool nearest_phase(double x, double y, int k_res, std::size_t& out) {
  const double norm = std::hypot(x, y);
  if (norm == 0.0) return false;
  double theta = std::atan2(y, x);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  const double step = 2.0 * std::numbers::pi / k_res;
  auto k = static_cast<long>(std::llround(theta / step)) % k_res;
  const auto [c, s] = unit_phase(static_cast<std::size_t>(k), static_cast<std::size_t>(k_res));
  const double dist = std::hypot(x - c, y - s);
  if (dist > 0.5) return false;
  out = static_cast<std::size_t>(k);
  return true;
}

bool nearest_sign(double v, double& out) {
  const double s = v >= 0.0 ? 1.0 : -1.0;
  if (std::abs(v - s) > 0.5) return false;
  out = s;
  return true;
}

}  // namespace

const char* to_string(Codec c) {
  switch (c) {
    case Codec::bipolar8: return "bipolar8";
    case Codec::complex_phase: return "complex_phase";
    case Codec::quaternion_twin: return "quaternion_twin";
    case Codec::octonion_bits: return "octonion_bits";
  }
  return "?";
}

Codec codec_from_string(const std::string& s) {
  if (s == "bipolar8") return Codec::bipolar8;
  if (s == "complex_phase") return Codec::complex_phase;
  if (s == "quaternion_twin") return Codec::quaternion_twin;
  if (s == "octonion_bits") return Codec::octonion_bits;
  throw std::invalid_argument("unknown codec: " + s);
}

std::size_t encoded_length(Codec c, std::size_t pixel_count) {
  return c == Codec::bipolar8 ? 8 * pixel_count : pixel_count;
}

HVector encode(const GrayImage& img, Codec codec) {
  require(img.pixel_count() == img.width * img.height, "image pixel count mismatch");
  switch (codec) {
    case Codec::bipolar8: {
      HVector v(8 * img.pixel_count(), 1);
      std::size_t at = 0;
      for (const std::uint8_t x : img.pixels)
        for (int j = 0; j < 8; ++j) v.flat[at++] = 2 * bit(x, j) - 1;
      return v;
    }
    case Codec::complex_phase: {
      HVector v(img.pixel_count(), 2);
      for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const auto [c, s] = unit_phase(img.pixels[i], 256);
        v.flat[2 * i] = c;
        v.flat[2 * i + 1] = s;
      }
      return v;
    }
    case Codec::quaternion_twin: {
      HVector v(img.pixel_count(), 4);
      for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const std::uint8_t x = img.pixels[i];
        const std::size_t x1 = x & 0x0F;         // 8 b4 + 4 b3 + 2 b2 + b1
        const std::size_t x2 = (x >> 4) & 0x0F;  // 8 b8 + 4 b7 + 2 b6 + b5
        const auto [c0, s0] = unit_phase(x1, 16);
        const auto [c1, s1] = unit_phase(x2, 16);
        v.flat[4 * i] = c0;
        v.flat[4 * i + 1] = s0;
        v.flat[4 * i + 2] = c1;
        v.flat[4 * i + 3] = s1;
      }
      return v;
    }
    case Codec::octonion_bits: {
      HVector v(img.pixel_count(), 8);
      for (std::size_t i = 0; i < img.pixel_count(); ++i)
        for (int j = 0; j < 8; ++j) v.flat[8 * i + j] = 2 * bit(img.pixels[i], j) - 1;
      return v;
    }
  }
  throw std::invalid_argument("unknown codec");
}

GrayImage decode(const HVector& v, Codec codec, std::size_t width, std::size_t height) {
  const std::size_t pixel_count = width * height;
  require(v.size() == encoded_length(codec, pixel_count), "decode: vector length mismatch");
  GrayImage img;
  img.width = width;
  img.height = height;
  img.pixels.resize(pixel_count);
  switch (codec) {
    case Codec::bipolar8: {
      for (std::size_t i = 0; i < pixel_count; ++i) {
        int x = 0;
        for (int j = 0; j < 8; ++j) {
          double s = 0.0;
          require(nearest_sign(v.flat[8 * i + j], s), "decode: component too far from codomain");
          if (s > 0.0) x |= 1 << j;
        }
        img.pixels[i] = static_cast<std::uint8_t>(x);
      }
      return img;
    }
    case Codec::complex_phase: {
      for (std::size_t i = 0; i < pixel_count; ++i) {
        std::size_t k = 0;
        require(nearest_phase(v.flat[2 * i], v.flat[2 * i + 1], 256, k),
                "decode: component too far from codomain");
        img.pixels[i] = static_cast<std::uint8_t>(k);
      }
      return img;
    }
    case Codec::quaternion_twin: {
      for (std::size_t i = 0; i < pixel_count; ++i) {
        std::size_t x1 = 0, x2 = 0;
        require(nearest_phase(v.flat[4 * i], v.flat[4 * i + 1], 16, x1),
                "decode: component too far from codomain");
        require(nearest_phase(v.flat[4 * i + 2], v.flat[4 * i + 3], 16, x2),
                "decode: component too far from codomain");
        img.pixels[i] = static_cast<std::uint8_t>(x1 | (x2 << 4));
      }
      return img;
    }
    case Codec::octonion_bits: {
      for (std::size_t i = 0; i < pixel_count; ++i) {
        int x = 0;
        for (int j = 0; j < 8; ++j) {
          double s = 0.0;
          require(nearest_sign(v.flat[8 * i + j], s), "decode: component too far from codomain");
          if (s > 0.0) x |= 1 << j;
        }
        img.pixels[i] = static_cast<std::uint8_t>(x);
      }
      return img;
    }
  }
  throw std::invalid_argument("unknown codec");
}

GrayImage add_gaussian_noise(const GrayImage& img, double stdev, std::uint64_t seed) {
  require(stdev >= 0.0, "noise stdev must be non-negative");
  if (stdev == 0.0) return img;
  GrayImage out = img;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, stdev);
  for (auto& px : out.pixels) {
    const double v = std::llround(double(px) + noise(rng));
    px = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  return out;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), "cannot open PGM file: " + path.string());
  std::string magic;
  in >> magic;
  require(magic == "P5", "not a binary PGM (P5) file: " + path.string());
  auto next_value = [&in, &path]() {
    long v = -1;
    while (in) {
      in >> std::ws;
      if (in.peek() == '#') {
        std::string comment;
        std::getline(in, comment);
        continue;
      }
      in >> v;
      break;
    }
    require(v >= 0, "malformed PGM header: " + path.string());
    return static_cast<std::size_t>(v);
  };
  GrayImage img;
  img.width = next_value();
  img.height = next_value();
  const std::size_t maxval = next_value();
  require(maxval == 255, "only 8-bit PGM supported: " + path.string());
  in.get();  // single whitespace before the raster
  img.pixels.resize(img.width * img.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  require(in.gcount() == static_cast<std::streamsize>(img.pixels.size()),
          "truncated PGM raster: " + path.string());
  return img;
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(bool(out), "cannot write PGM file: " + path.string());
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
}

std::vector<GrayImage> synthetic_images(std::size_t count, std::size_t width,
                                        std::size_t height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<GrayImage> images(count);
  for (auto& img : images) {
    img.width = width;
    img.height = height;
    img.pixels.resize(width * height);
    for (auto& px : img.pixels) px = static_cast<std::uint8_t>(byte(rng));
  }
  return images;
}

NetworkConfig codec_network(Codec codec, std::size_t width, std::size_t height, double a) {
  NetworkConfig cfg;
  const auto n = static_cast<double>(encoded_length(codec, width * height));
  cfg.excitation.kind = ExcitationKind::exponential;
  cfg.excitation.beta = std::exp(-a);
  switch (codec) {
    case Codec::bipolar8:
      cfg.algebra = Algebra::reals();
      cfg.involution = Involution::trivial;
      cfg.activation = {ActivationKind::bipolar_sign, 2};
      cfg.excitation.alpha = a / n;
      break;
    case Codec::complex_phase:
      cfg.algebra = Algebra::complex_numbers();
      cfg.involution = Involution::natural;
      cfg.activation = {ActivationKind::csgn, 256};
      cfg.excitation.alpha = a / n;
      break;
    case Codec::quaternion_twin:
      cfg.algebra = Algebra::quaternions();
      cfg.involution = Involution::natural;
      cfg.activation = {ActivationKind::twin_multistate, 16};
      cfg.excitation.alpha = a / (2.0 * n);
      break;
    case Codec::octonion_bits:
      cfg.algebra = Algebra::octonions();
      cfg.involution = Involution::natural;
      cfg.activation = {ActivationKind::split_sign, 2};
      cfg.excitation.alpha = a / (8.0 * n);
      break;
  }
  return cfg;
}

std::vector<RecallRow> recall_experiment(Codec codec, const std::vector<GrayImage>& images,
                                         const std::vector<UpdateMode>& modes,
                                         const std::vector<double>& noise_levels, int trials,
                                         double a, std::uint64_t seed, std::size_t max_sweeps) {
  require(!images.empty(), "recall experiment needs at least one image");
  const std::size_t width = images.front().width;
  const std::size_t height = images.front().height;
  for (const auto& img : images)
    require(img.width == width && img.height == height, "images must share one size");

  NetworkConfig cfg = codec_network(codec, width, height, a);
  cfg.max_sweeps = max_sweeps;
  std::vector<HVector> encoded;
  encoded.reserve(images.size());
  for (const auto& img : images) encoded.push_back(encode(img, codec));
  const MemorySet mem = MemorySet::from_vectors(cfg.algebra, encoded);
  validate_memories(cfg, mem);

  std::vector<RecallRow> rows;
  for (const UpdateMode mode : modes)
    for (const double noise : noise_levels)
      rows.push_back({codec, mode, noise, 0, 0});

  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(trial));
    std::uniform_int_distribution<std::size_t> pick(0, images.size() - 1);
    const std::size_t target = pick(rng);
    const std::uint64_t noise_seed = rng();

    std::size_t row = 0;
    for (const UpdateMode mode : modes) {
      cfg.update = mode;
      for (const double noise : noise_levels) {
        const GrayImage corrupted = add_gaussian_noise(images[target], noise, noise_seed);
        const RunResult res = run(cfg, mem, encode(corrupted, codec));
        bool success = false;
        try {
          success = decode(res.final_state, codec, width, height) == images[target];
        } catch (const std::invalid_argument&) {
          success = false;
        }
        rows[row].trials++;
        if (success) rows[row].successes++;
        ++row;
      }
    }
  }
  return rows;
}

}  // namespace hyperam
