#include "hyperam/activation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace hyperam {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Phase table for one resolution factor, shared across calls.
using PhaseTable = std::vector<std::pair<double, double>>;

std::shared_ptr<const PhaseTable> phase_table(int k_res) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const PhaseTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k_res);
  if (it != cache.end()) return it->second;
  auto table = std::make_shared<PhaseTable>();
  table->reserve(static_cast<std::size_t>(k_res));
  for (int k = 0; k < k_res; ++k)
    table->push_back(unit_phase(static_cast<std::size_t>(k), static_cast<std::size_t>(k_res)));
  cache.emplace(k_res, table);
  return table;
}

// Sector index of (x, y) for resolution K, or nullopt when the point is the
// origin or sits bit-exactly on a sector boundary ray (2k-1) * pi/K.
std::optional<std::size_t> csgn_sector(double x, double y, int k_res) {
  if (x == 0.0 && y == 0.0) return std::nullopt;
  double theta = std::atan2(y, x);
  if (theta < 0.0) theta += kTwoPi;
  const double dtheta = std::numbers::pi / k_res;
  const double t = (theta + dtheta) / (2.0 * dtheta);
  if (t == std::floor(t)) return std::nullopt;  // boundary ray
  auto k = static_cast<long>(std::floor(t)) % k_res;
  return static_cast<std::size_t>(k);
}

double sgn(double v) { return v > 0.0 ? 1.0 : -1.0; }

}  // namespace

const char* to_string(ActivationKind k) {
  switch (k) {
    case ActivationKind::bipolar_sign: return "bipolar_sign";
    case ActivationKind::csgn: return "csgn";
    case ActivationKind::csgn_conjugated: return "csgn_conjugated";
    case ActivationKind::twin_multistate: return "twin_multistate";
    case ActivationKind::continuous_sigma: return "continuous_sigma";
    case ActivationKind::split_sign: return "split_sign";
  }
  return "?";
}

ActivationKind activation_kind_from_string(const std::string& s) {
  if (s == "bipolar_sign") return ActivationKind::bipolar_sign;
  if (s == "csgn") return ActivationKind::csgn;
  if (s == "csgn_conjugated") return ActivationKind::csgn_conjugated;
  if (s == "twin_multistate") return ActivationKind::twin_multistate;
  if (s == "continuous_sigma") return ActivationKind::continuous_sigma;
  if (s == "split_sign") return ActivationKind::split_sign;
  throw std::invalid_argument("unknown activation kind: " + s);
}

std::pair<double, double> unit_phase(std::size_t k, std::size_t n) {
  k %= n;
  if (n % 4 == 0) {
    const std::size_t quarter = n / 4;
    const std::size_t q = k / quarter;
    const std::size_t r = k % quarter;
    const double a = kTwoPi * static_cast<double>(r) / static_cast<double>(n);
    const double c = std::cos(a), s = std::sin(a);
    // The +0.0 washes out negative zeros so table elements compare
    // bit-exactly against literal coefficients.
    switch (q) {
      case 0: return {c + 0.0, s + 0.0};
      case 1: return {-s + 0.0, c + 0.0};
      case 2: return {-c + 0.0, -s + 0.0};
      default: return {s + 0.0, -c + 0.0};
    }
  }
  const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
  return {std::cos(a), std::sin(a)};
}

std::size_t expected_dim(const Activation& act) {
  switch (act.kind) {
    case ActivationKind::bipolar_sign: return 1;
    case ActivationKind::csgn:
    case ActivationKind::csgn_conjugated: return 2;
    case ActivationKind::twin_multistate: return 4;
    case ActivationKind::continuous_sigma:
    case ActivationKind::split_sign: return 0;
  }
  return 0;
}

StateAlphabet alphabet(const Activation& act, std::size_t dim) {
  StateAlphabet s;
  switch (act.kind) {
    case ActivationKind::bipolar_sign:
      s.dim = 1;
      s.elements = {HNumber{-1.0}, HNumber{+1.0}};
      return s;
    case ActivationKind::csgn:
    case ActivationKind::csgn_conjugated: {
      require(act.resolution > 1, "csgn resolution factor K must be > 1");
      s.dim = 2;
      const auto table = phase_table(act.resolution);
      for (const auto& [c, si] : *table) s.elements.push_back(HNumber{c, si});
      return s;
    }
    case ActivationKind::twin_multistate: {
      require(act.resolution > 1, "twin resolution factor K must be > 1");
      s.dim = 4;
      const auto table = phase_table(act.resolution);
      for (const auto& [c0, s0] : *table)
        for (const auto& [c1, s1] : *table) s.elements.push_back(HNumber{c0, s0, c1, s1});
      return s;
    }
    case ActivationKind::continuous_sigma:
      require(dim >= 1, "continuous_sigma needs a positive dimension");
      s.dim = dim;
      s.unit_sphere = true;
      return s;
    case ActivationKind::split_sign: {
      require(dim >= 1 && dim <= 20, "split_sign alphabet dimension out of range");
      s.dim = dim;
      const std::size_t count = std::size_t{1} << dim;
      s.elements.reserve(count);
      for (std::size_t r = 0; r < count; ++r) {
        HNumber v(dim);
        for (std::size_t j = 0; j < dim; ++j)
          v[j] = ((r >> (dim - 1 - j)) & 1) ? 1.0 : -1.0;
        s.elements.push_back(std::move(v));
      }
      return s;
    }
  }
  throw std::invalid_argument("unknown activation kind");
}

std::optional<HNumber> apply(const Activation& act, const HNumber& h) {
  const std::size_t want = expected_dim(act);
  require(want == 0 || h.dim() == want, "activation/algebra dimension mismatch");
  require(h.dim() >= 1, "empty hypercomplex number");
  switch (act.kind) {
    case ActivationKind::bipolar_sign: {
      if (h[0] == 0.0) return std::nullopt;
      return HNumber{sgn(h[0])};
    }
    case ActivationKind::csgn:
    case ActivationKind::csgn_conjugated: {
      require(act.resolution > 1, "csgn resolution factor K must be > 1");
      const double y = act.kind == ActivationKind::csgn ? h[1] : -h[1];
      const auto k = csgn_sector(h[0], y, act.resolution);
      if (!k) return std::nullopt;
      const auto& [c, s] = (*phase_table(act.resolution))[*k];
      return HNumber{c, s};
    }
    case ActivationKind::twin_multistate: {
      require(act.resolution > 1, "twin resolution factor K must be > 1");
      const auto k0 = csgn_sector(h[0], h[1], act.resolution);
      const auto k1 = csgn_sector(h[2], h[3], act.resolution);
      if (!k0 || !k1) return std::nullopt;
      const auto& table = *phase_table(act.resolution);
      const auto& [c0, s0] = table[*k0];
      const auto& [c1, s1] = table[*k1];
      return HNumber{c0, s0, c1, s1};
    }
    case ActivationKind::continuous_sigma: {
      double norm2 = 0.0;
      for (std::size_t j = 0; j < h.dim(); ++j) norm2 += h[j] * h[j];
      if (norm2 == 0.0) return std::nullopt;
      const double norm = std::sqrt(norm2);
      HNumber r(h.dim());
      for (std::size_t j = 0; j < h.dim(); ++j) r[j] = h[j] / norm;
      return r;
    }
    case ActivationKind::split_sign: {
      HNumber r(h.dim());
      for (std::size_t j = 0; j < h.dim(); ++j) {
        if (h[j] == 0.0) return std::nullopt;
        r[j] = sgn(h[j]);
      }
      return r;
    }
  }
  throw std::invalid_argument("unknown activation kind");
}

bool in_domain(const Activation& act, const HNumber& h) {
  const std::size_t want = expected_dim(act);
  if (want != 0 && h.dim() != want) return false;
  switch (act.kind) {
    case ActivationKind::bipolar_sign:
      return h[0] != 0.0;
    case ActivationKind::csgn:
      return csgn_sector(h[0], h[1], act.resolution).has_value();
    case ActivationKind::csgn_conjugated:
      return csgn_sector(h[0], -h[1], act.resolution).has_value();
    case ActivationKind::twin_multistate:
      return csgn_sector(h[0], h[1], act.resolution).has_value() &&
             csgn_sector(h[2], h[3], act.resolution).has_value();
    case ActivationKind::continuous_sigma: {
      for (std::size_t j = 0; j < h.dim(); ++j)
        if (h[j] != 0.0) return true;
      return false;
    }
    case ActivationKind::split_sign: {
      for (std::size_t j = 0; j < h.dim(); ++j)
        if (h[j] == 0.0) return false;
      return true;
    }
  }
  return false;
}

HNumber random_state(const StateAlphabet& alph, std::mt19937_64& rng) {
  if (alph.unit_sphere) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    HNumber v(alph.dim);
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (std::size_t j = 0; j < alph.dim; ++j) {
        v[j] = gauss(rng);
        norm2 += v[j] * v[j];
      }
    } while (norm2 == 0.0);
    const double inv_norm = 1.0 / std::sqrt(norm2);
    for (std::size_t j = 0; j < alph.dim; ++j) v[j] *= inv_norm;
    return v;
  }
  std::uniform_int_distribution<std::size_t> pick(0, alph.elements.size() - 1);
  return alph.elements[pick(rng)];
}

BFunctionReport check_b_function(const Activation& act, const Algebra& alg,
                                 Involution inv, std::size_t samples,
                                 std::uint64_t seed) {
  require(samples >= 1, "check_b_function: sample_count must be >= 1");
  const std::size_t want = expected_dim(act);
  require(want == 0 || alg.dim() == want, "activation/algebra dimension mismatch");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.5, 1.5);
  auto random_in_domain = [&] {
    HNumber q(alg.dim());
    do {
      for (std::size_t j = 0; j < alg.dim(); ++j) q[j] = coeff(rng);
    } while (!in_domain(act, q));
    return q;
  };

  BFunctionReport rep;
  rep.samples = samples;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  constexpr double kTol = 1e-12;

  if (act.kind == ActivationKind::continuous_sigma) {
    const StateAlphabet sphere = alphabet(act, alg.dim());
    for (std::size_t n = 0; n < samples; ++n) {
      const HNumber q = random_in_domain();
      const HNumber phi = *apply(act, q);
      double norm2 = 0.0;
      for (std::size_t j = 0; j < q.dim(); ++j) norm2 += q[j] * q[j];
      const double norm = std::sqrt(norm2);
      const double self = bilinear(alg, inv, phi, q);
      if (std::abs(self - norm) > 1e-10) {
        rep.counterexample = BFunctionCounterexample{q, phi, phi, self - norm};
        rep.worst_margin = std::min(rep.worst_margin, self - norm);
        rep.passed = false;
        return rep;
      }
      for (int t = 0; t < 8; ++t) {
        const HNumber s = random_state(sphere, rng);
        const double margin = self - bilinear(alg, inv, s, q);
        rep.worst_margin = std::min(rep.worst_margin, margin);
        if (margin <= kTol && !(s == phi)) {
          rep.counterexample = BFunctionCounterexample{q, phi, s, margin};
          rep.passed = false;
          return rep;
        }
      }
    }
    rep.passed = true;
    return rep;
  }

  const StateAlphabet alph = alphabet(act, alg.dim());
  for (std::size_t n = 0; n < samples; ++n) {
    const HNumber q = random_in_domain();
    const HNumber phi = *apply(act, q);
    const double self = bilinear(alg, inv, phi, q);
    for (const HNumber& s : alph.elements) {
      if (s == phi) continue;
      const double margin = self - bilinear(alg, inv, s, q);
      rep.worst_margin = std::min(rep.worst_margin, margin);
      if (margin <= kTol && !rep.counterexample) {
        rep.counterexample = BFunctionCounterexample{q, phi, s, margin};
      }
    }
  }
  rep.passed = !rep.counterexample.has_value();
  return rep;
}

}  // namespace hyperam
