#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperam/activation.hpp"
#include "hyperam/algebra.hpp"

namespace hyperam {

enum class ExcitationKind { identity, high_order, potential, exponential };

const char* to_string(ExcitationKind k);
ExcitationKind excitation_kind_from_string(const std::string& s);

struct Excitation {
  ExcitationKind kind = ExcitationKind::exponential;
  double alpha = 1.0;   // exponential rate, > 0
  double beta = 1.0;    // exponential gain, > 0
  double order = 2.0;   // high_order exponent q, > 1
  double depth = 1.0;   // potential exponent L, >= 1
  bool normalize = false;  // exponential only: subtract max correlation first
};

enum class UpdateMode { synchronous, asynchronous };
enum class AsyncOrder { cyclic, random_order };

const char* to_string(UpdateMode m);
const char* to_string(AsyncOrder o);

struct NetworkConfig {
  Algebra algebra;
  Involution involution = Involution::natural;
  Activation activation;
  Excitation excitation;
  UpdateMode update = UpdateMode::synchronous;
  AsyncOrder async_order = AsyncOrder::cyclic;
  std::uint64_t seed = 0;  // drives the random asynchronous order
  std::size_t max_sweeps = 1000;
};

/// The P stored vectors, each with `n` hypercomplex components, kept flat
/// so the correlation kernels can stream over them.
struct MemorySet {
  Algebra algebra;
  std::size_t n = 0;          // components per memory
  std::vector<double> flat;   // count * n * algebra.dim

  std::size_t count() const {
    const std::size_t stride = n * algebra.dim();
    return stride == 0 ? 0 : flat.size() / stride;
  }
  std::span<const double> memory_span(std::size_t xi) const {
    const std::size_t stride = n * algebra.dim();
    return {flat.data() + xi * stride, stride};
  }
  HVector memory(std::size_t xi) const;

  static MemorySet from_vectors(const Algebra& alg, const std::vector<HVector>& memories);
};

/// Validates that every component of `x` sits in the codomain of `act`
/// (within 1e-9); throws std::invalid_argument otherwise.
void require_in_codomain(const Activation& act, const StateAlphabet& alph, const HVector& x,
                         const char* what);

/// Checks the memory-set invariant: every component of every stored vector
/// lies in the activation's codomain.
void validate_memories(const NetworkConfig& cfg, const MemorySet& mem);

struct Weights {
  std::vector<double> w;
  // Potential-function excitation: correlation at its singularity. The
  // caller recalls that memory directly.
  std::optional<std::size_t> exact_match;
};

/// Correlations c_xi = sum_i B(u_i^xi, x_i).
std::vector<double> correlations(const NetworkConfig& cfg, const MemorySet& mem,
                                 const HVector& x);
/// Same quantity via the literal involute-multiply route; used as the
/// independent cross-check of the kernel path.
std::vector<double> correlations_reference(const NetworkConfig& cfg, const MemorySet& mem,
                                           const HVector& x);

/// N * max_{s in S} B(s, s): the normalization used by the high-order and
/// potential excitations.
double codomain_scale(const NetworkConfig& cfg, std::size_t n);

Weights excite(const Excitation& f, std::span<const double> c, double scale);

HVector potentials(const MemorySet& mem, std::span<const double> w);

std::vector<double> init_weights(const NetworkConfig& cfg, const MemorySet& mem,
                                 const HVector& x);

/// Incremental exponential weight refresh after component i changed from
/// `before` to `after`: w_xi *= exp(alpha * B(u_i^xi, after - before)).
void update_weight_cache(const NetworkConfig& cfg, const MemorySet& mem, std::size_t i,
                         const HNumber& before, const HNumber& after, std::span<double> w);

std::pair<HVector, std::size_t> step_sync(const NetworkConfig& cfg, const MemorySet& mem,
                                          const HVector& x);

/// Updates component i in place from the current state; returns true when it
/// changed. `w_cache` (exponential excitation only) is kept consistent via
/// the incremental rule; pass nullptr to recompute weights from scratch.
bool step_async(const NetworkConfig& cfg, const MemorySet& mem, HVector& x, std::size_t i,
                std::vector<double>* w_cache);

/// The primitive F with F'(c) = f(c / scale-normalized argument) matched to
/// the excitation kind; the energy is E(x) = -sum_xi F(c_xi).
/// Returns -infinity at a potential-function singularity.
double energy_primitive(const Excitation& f, double c, double scale);

/// E(x) = -sum_xi F(c_xi), F the primitive matched to the excitation kind.
/// Returns -infinity at a potential-function singularity.
double energy(const NetworkConfig& cfg, const MemorySet& mem, const HVector& x);

enum class RunStatus { converged, cycled, max_sweeps_reached };
const char* to_string(RunStatus s);

struct RunResult {
  HVector final_state;
  // (time, energy): the initial state plus one row per sweep that moved the
  // state. Time advances 1 per synchronous step and 1/N per neuron update.
  std::vector<std::pair<double, double>> energy_trace;
  std::size_t sweeps_used = 0;       // sweeps that changed at least one component
  std::size_t sweeps_executed = 0;
  RunStatus status = RunStatus::max_sweeps_reached;
  std::size_t cycle_period = 0;
  std::vector<HVector> cycle_states;
  double settle_time = 0.0;  // time coordinate of the last state change
};

RunResult run(const NetworkConfig& cfg, const MemorySet& mem, const HVector& x0);

HVector random_state_vector(const NetworkConfig& cfg, std::size_t n, std::mt19937_64& rng);
MemorySet random_memories(const NetworkConfig& cfg, std::size_t n, std::size_t p,
                          std::mt19937_64& rng);

}  // namespace hyperam
