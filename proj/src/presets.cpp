#include <cmath>
#include <stdexcept>

#include "hyperam/config.hpp"

namespace hyperam {

namespace {

// Component values (c, s) for the K=4 phase alphabet come out exact, so the
// preset memory sets are bit-identical to the activation codomain elements.
HVector from_coeffs(std::size_t dim, std::initializer_list<double> coeffs) {
  HVector v(coeffs.size() / dim, dim);
  std::copy(coeffs.begin(), coeffs.end(), v.flat.begin());
  return v;
}

// The three bipolar patterns stored by the first worked example.
std::vector<HVector> bipolar_example_memories() {
  return {
      from_coeffs(1, {-1, -1, +1, +1}),
      from_coeffs(1, {-1, +1, -1, -1}),
      from_coeffs(1, {+1, +1, -1, -1}),
  };
}

// [1, -i], [i, 1], [-i, 1] over a two-dimensional algebra.
std::vector<HVector> phase_example_memories() {
  return {
      from_coeffs(2, {1, 0, 0, -1}),
      from_coeffs(2, {0, 1, 1, 0}),
      from_coeffs(2, {0, -1, 1, 0}),
  };
}

// 1 - k, i + j, -i + j: the single-neuron twin-multistate example.
std::vector<HVector> quaternion_example_memories() {
  return {
      from_coeffs(4, {1, 0, 0, -1}),
      from_coeffs(4, {0, 1, 1, 0}),
      from_coeffs(4, {0, -1, 1, 0}),
  };
}

ExperimentConfig dynamics_base() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::dynamics;
  cfg.net.excitation = {ExcitationKind::exponential, 1.0, 1.0, 2.0, 1.0, false};
  cfg.net.max_sweeps = 64;
  return cfg;
}

ExperimentConfig energy_base(std::size_t runs, std::size_t max_sweeps) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::energy_trace;
  cfg.n = 100;
  cfg.p = 160;
  cfg.runs = runs;
  cfg.net.excitation.kind = ExcitationKind::exponential;
  cfg.net.excitation.beta = std::exp(-10.0);
  cfg.net.max_sweeps = max_sweeps;
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"example1",        "example2",          "example3",
          "example4",        "example5",          "energy_bipolar",
          "energy_complex",  "energy_hyperbolic", "energy_quaternion",
          "energy_octonion_split", "energy_octonion_sigma", "recall_table1",
          "verify_default"};
}

ExperimentConfig preset(const std::string& name) {
  if (name == "example1") {
    ExperimentConfig cfg = dynamics_base();
    cfg.preset = name;
    cfg.net.algebra = Algebra::reals();
    cfg.net.involution = Involution::trivial;
    cfg.net.activation = {ActivationKind::bipolar_sign, 2};
    cfg.memories = bipolar_example_memories();
    cfg.alpha_readings = {0.25, 1.0};
    return cfg;
  }
  if (name == "example2") {
    ExperimentConfig cfg = dynamics_base();
    cfg.preset = name;
    cfg.net.algebra = Algebra::complex_numbers();
    cfg.net.involution = Involution::natural;
    cfg.net.activation = {ActivationKind::csgn, 4};
    cfg.memories = phase_example_memories();
    cfg.alpha_readings = {0.5, 1.0};
    return cfg;
  }
  if (name == "example3") {
    ExperimentConfig cfg = dynamics_base();
    cfg.preset = name;
    cfg.net.algebra = Algebra::hyperbolic();
    cfg.net.involution = Involution::natural;
    cfg.net.activation = {ActivationKind::csgn, 4};
    cfg.memories = phase_example_memories();
    cfg.alpha_readings = {0.5, 1.0};
    return cfg;
  }
  if (name == "example4") {
    ExperimentConfig cfg = dynamics_base();
    cfg.preset = name;
    cfg.net.algebra = Algebra::hyperbolic();
    cfg.net.involution = Involution::natural;
    cfg.net.activation = {ActivationKind::csgn_conjugated, 4};
    cfg.memories = phase_example_memories();
    cfg.alpha_readings = {1.0};
    return cfg;
  }
  if (name == "example5") {
    ExperimentConfig cfg = dynamics_base();
    cfg.preset = name;
    cfg.net.algebra = Algebra::quaternions();
    cfg.net.involution = Involution::natural;
    cfg.net.activation = {ActivationKind::twin_multistate, 4};
    cfg.memories = quaternion_example_memories();
    cfg.alpha_readings = {0.5, 1.0};
    return cfg;
  }

  if (name == "energy_bipolar") {
    ExperimentConfig cfg = energy_base(20, 1000);
    cfg.preset = name;
    cfg.net.algebra = Algebra::reals();
    cfg.net.involution = Involution::trivial;
    cfg.net.activation = {ActivationKind::bipolar_sign, 2};
    cfg.net.excitation.alpha = 10.0 / 100.0;
    return cfg;
  }
  if (name == "energy_complex") {
    ExperimentConfig cfg = energy_base(20, 1000);
    cfg.preset = name;
    cfg.net.algebra = Algebra::complex_numbers();
    cfg.net.involution = Involution::natural;
    cfg.net.activation = {ActivationKind::csgn, 256};
    cfg.net.excitation.alpha = 10.0 / 100.0;
    return cfg;
  }
  if (name == "energy_hyperbolic") {
    // csgn is not a B-function over the hyperbolic numbers; these runs are
    // expected not to settle.
    ExperimentConfig cfg = energy_base(10, 200);
    cfg.preset = name;
    cfg.net.algebra = Algebra::hyperbolic();
    cfg.net.involution = Involution::natural;
    cfg.net.activation = {ActivationKind::csgn, 256};
    cfg.net.excitation.alpha = 10.0 / 100.0;
    return cfg;
  }
  if (name == "energy_quaternion") {
    ExperimentConfig cfg = energy_base(20, 1000);
    cfg.preset = name;
    cfg.net.algebra = Algebra::quaternions();
    cfg.net.involution = Involution::natural;
    cfg.net.activation = {ActivationKind::twin_multistate, 16};
    cfg.net.excitation.alpha = 10.0 / (2.0 * 100.0);
    return cfg;
  }
  if (name == "energy_octonion_split") {
    ExperimentConfig cfg = energy_base(20, 1000);
    cfg.preset = name;
    cfg.net.algebra = Algebra::octonions();
    cfg.net.involution = Involution::natural;
    cfg.net.activation = {ActivationKind::split_sign, 2};
    cfg.net.excitation.alpha = 10.0 / (8.0 * 100.0);
    return cfg;
  }
  if (name == "energy_octonion_sigma") {
    ExperimentConfig cfg = energy_base(20, 1000);
    cfg.preset = name;
    cfg.net.algebra = Algebra::octonions();
    cfg.net.involution = Involution::natural;
    cfg.net.activation = {ActivationKind::continuous_sigma, 2};
    cfg.net.excitation.alpha = 10.0 / 100.0;
    return cfg;
  }

  if (name == "recall_table1") {
    ExperimentConfig cfg;
    cfg.preset = name;
    cfg.kind = ExperimentKind::image_recall;
    cfg.codecs = {Codec::bipolar8, Codec::complex_phase, Codec::quaternion_twin,
                  Codec::octonion_bits};
    cfg.noise_levels = {25, 50, 75, 100};
    cfg.trials = 30;
    cfg.a_param = 20.0;
    cfg.image_count = 20;
    cfg.image_width = 32;
    cfg.image_height = 32;
    cfg.net.max_sweeps = 100;
    return cfg;
  }

  if (name == "verify_default") {
    ExperimentConfig cfg;
    cfg.preset = name;
    cfg.kind = ExperimentKind::verify;
    return cfg;
  }

  throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace hyperam
