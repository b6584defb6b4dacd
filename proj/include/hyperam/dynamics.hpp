#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperam/rcnn.hpp"

namespace hyperam {

/// Exhaustive transition structure of a small network: every state in
/// S^N, its synchronous successor, and the per-neuron asynchronous
/// successors. States are indexed in canonical order (component 1 most
/// significant digit, alphabet in construction order); exports are 1-based.
struct StateGraph {
  StateAlphabet alph;
  std::size_t n_components = 0;
  std::size_t state_count = 0;
  std::vector<std::uint32_t> sync_edges;    // one successor per state
  std::vector<std::uint32_t> async_edges;   // state_count * n_components, self if unchanged
  std::vector<std::uint32_t> memory_indices;

  HVector state(std::size_t idx) const;
  std::size_t index_of(const HVector& x) const;

  /// Stationary under every single-neuron update.
  bool async_stationary(std::size_t idx) const;
};

/// All N-tuples over S in canonical order. Rejects |S|^N > 2^20.
std::vector<HVector> enumerate_states(const StateAlphabet& alph, std::size_t n);

StateGraph build_graph(const NetworkConfig& cfg, const MemorySet& mem);

enum class StateKind { fixed, cycle, transient };

struct Classification {
  std::vector<StateKind> kind;                    // per state
  std::vector<std::uint32_t> attractor_of;        // attractor id per state
  std::vector<std::uint32_t> fixed_points;        // state indices
  std::vector<std::uint32_t> spurious;            // fixed points not in the memory set
  std::vector<std::vector<std::uint32_t>> cycles; // period >= 2 orbits of the sync map
  std::vector<std::size_t> basin_size;            // per attractor id
};

Classification classify(const StateGraph& graph);

/// DOT digraph of the synchronous map, or of the per-neuron asynchronous
/// edges; fundamental memories come out as shaded nodes. `header_lines`
/// are emitted as comments (config echo).
std::string export_dot(const StateGraph& graph, bool async_mode,
                       const std::vector<std::string>& header_lines = {});

/// CSV rows: state_index,kind,attractor_id,basin_size (1-based indices).
std::string attractor_csv(const StateGraph& graph, const Classification& cls);

}  // namespace hyperam
