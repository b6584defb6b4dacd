#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "hyperam/algebra.hpp"

namespace hyperam {

enum class ActivationKind {
  bipolar_sign,
  csgn,
  csgn_conjugated,
  twin_multistate,
  continuous_sigma,
  split_sign,
};

const char* to_string(ActivationKind k);
ActivationKind activation_kind_from_string(const std::string& s);

struct Activation {
  ActivationKind kind = ActivationKind::bipolar_sign;
  int resolution = 2;  // K, used by the multistate kinds (K > 1)
};

/// The codomain S: an explicit element list for the finite kinds, or the
/// unit sphere for the continuous kind.
struct StateAlphabet {
  std::size_t dim = 1;
  bool unit_sphere = false;
  std::vector<HNumber> elements;

  std::size_t size() const { return elements.size(); }
};

/// Coefficient dimension an activation expects, 0 meaning any.
std::size_t expected_dim(const Activation& act);

/// Codomain of `act` over a dim-dimensional number system. `dim` only
/// matters for the kinds that work on arbitrary algebras.
StateAlphabet alphabet(const Activation& act, std::size_t dim);

/// phi(h), or nullopt when h lies outside the domain D (the caller keeps
/// the previous neuron state in that case).
std::optional<HNumber> apply(const Activation& act, const HNumber& h);

bool in_domain(const Activation& act, const HNumber& h);

/// Phase element e^{2 pi k / n} as a (cos, sin) pair, quadrant-reduced so
/// axis-aligned elements come out exactly (1,0), (0,1), (-1,0), (0,-1).
std::pair<double, double> unit_phase(std::size_t k, std::size_t n);

HNumber random_state(const StateAlphabet& alph, std::mt19937_64& rng);

struct BFunctionCounterexample {
  HNumber q;
  HNumber phi_q;
  HNumber s;
  double margin = 0.0;  // B(phi(q), q) - B(s, q)
};

struct BFunctionReport {
  bool passed = false;
  double worst_margin = 0.0;
  std::size_t samples = 0;
  std::optional<BFunctionCounterexample> counterexample;
};

/// Samples random in-domain points and checks the strict dominance
/// B(phi(q), q) > B(s, q) against every other codomain element (finite
/// kinds) or against random unit-sphere elements plus the identity
/// B(sigma(q), q) = |q| (continuous kind).
BFunctionReport check_b_function(const Activation& act, const Algebra& alg,
                                 Involution inv, std::size_t samples,
                                 std::uint64_t seed = 1);

}  // namespace hyperam
