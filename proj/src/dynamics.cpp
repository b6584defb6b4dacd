#include "hyperam/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace hyperam {

namespace {

constexpr std::size_t kStateCap = std::size_t{1} << 20;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::size_t checked_power(std::size_t base, std::size_t exp) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    require(base == 0 || count <= kStateCap / base, "state space larger than 2^20");
    count *= base;
  }
  require(count <= kStateCap, "state space larger than 2^20");
  return count;
}

// Digits of a state index, component 0 most significant.
void index_to_digits(std::size_t idx, std::size_t base, std::span<std::size_t> digits) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    digits[i] = idx % base;
    idx /= base;
  }
}

struct ComponentIndex {
  std::unordered_map<std::string, std::size_t> by_bits;

  explicit ComponentIndex(const StateAlphabet& alph) {
    for (std::size_t d = 0; d < alph.elements.size(); ++d) {
      const auto& e = alph.elements[d];
      by_bits.emplace(std::string(reinterpret_cast<const char*>(e.c.data()),
                                  e.c.size() * sizeof(double)),
                      d);
    }
  }

  std::size_t digit(std::span<const double> comp) const {
    const std::string key(reinterpret_cast<const char*>(comp.data()),
                          comp.size() * sizeof(double));
    const auto it = by_bits.find(key);
    require(it != by_bits.end(), "state component is not a codomain element");
    return it->second;
  }
};

}  // namespace

HVector StateGraph::state(std::size_t idx) const {
  std::vector<std::size_t> digits(n_components);
  index_to_digits(idx, alph.elements.size(), digits);
  HVector x(n_components, alph.dim);
  for (std::size_t i = 0; i < n_components; ++i) x.set_component(i, alph.elements[digits[i]]);
  return x;
}

std::size_t StateGraph::index_of(const HVector& x) const {
  const ComponentIndex lookup(alph);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n_components; ++i)
    idx = idx * alph.elements.size() + lookup.digit(x.component_span(i));
  return idx;
}

bool StateGraph::async_stationary(std::size_t idx) const {
  for (std::size_t i = 0; i < n_components; ++i)
    if (async_edges[idx * n_components + i] != idx) return false;
  return true;
}

std::vector<HVector> enumerate_states(const StateAlphabet& alph, std::size_t n) {
  require(!alph.unit_sphere, "cannot enumerate a continuous codomain");
  require(n >= 1, "enumerate_states: N must be positive");
  const std::size_t count = checked_power(alph.elements.size(), n);
  std::vector<HVector> states;
  states.reserve(count);
  std::vector<std::size_t> digits(n);
  for (std::size_t idx = 0; idx < count; ++idx) {
    index_to_digits(idx, alph.elements.size(), digits);
    HVector x(n, alph.dim);
    for (std::size_t i = 0; i < n; ++i) x.set_component(i, alph.elements[digits[i]]);
    states.push_back(std::move(x));
  }
  return states;
}

StateGraph build_graph(const NetworkConfig& cfg, const MemorySet& mem) {
  StateGraph g;
  g.alph = alphabet(cfg.activation, cfg.algebra.dim());
  require(!g.alph.unit_sphere, "cannot enumerate a continuous codomain");
  g.n_components = mem.n;
  g.state_count = checked_power(g.alph.elements.size(), g.n_components);
  g.sync_edges.resize(g.state_count);
  g.async_edges.resize(g.state_count * g.n_components);

  const ComponentIndex lookup(g.alph);
  auto index_of = [&](const HVector& x) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < g.n_components; ++i)
      idx = idx * g.alph.elements.size() + lookup.digit(x.component_span(i));
    return static_cast<std::uint32_t>(idx);
  };

  for (std::size_t idx = 0; idx < g.state_count; ++idx) {
    const HVector x = g.state(idx);
    g.sync_edges[idx] = index_of(step_sync(cfg, mem, x).first);
    for (std::size_t i = 0; i < g.n_components; ++i) {
      HVector y = x;
      step_async(cfg, mem, y, i, nullptr);
      g.async_edges[idx * g.n_components + i] = index_of(y);
    }
  }

  for (std::size_t xi = 0; xi < mem.count(); ++xi)
    g.memory_indices.push_back(index_of(mem.memory(xi)));
  return g;
}

Classification classify(const StateGraph& g) {
  Classification cls;
  const std::size_t count = g.state_count;
  cls.kind.assign(count, StateKind::transient);
  cls.attractor_of.assign(count, 0);

  // Cycle decomposition of the functional sync map.
  enum : std::uint8_t { unseen, on_path, done };
  std::vector<std::uint8_t> color(count, unseen);
  std::vector<std::uint32_t> path;
  for (std::size_t start = 0; start < count; ++start) {
    if (color[start] != unseen) continue;
    path.clear();
    std::uint32_t v = static_cast<std::uint32_t>(start);
    while (color[v] == unseen) {
      color[v] = on_path;
      path.push_back(v);
      v = g.sync_edges[v];
    }
    if (color[v] == on_path) {
      // Found a fresh cycle starting at v.
      std::vector<std::uint32_t> cycle;
      std::size_t at = path.size();
      while (at-- > 0) {
        cycle.push_back(path[at]);
        if (path[at] == v) break;
      }
      std::reverse(cycle.begin(), cycle.end());
      if (cycle.size() == 1) {
        cls.kind[cycle[0]] = StateKind::fixed;
      } else {
        for (const std::uint32_t s : cycle) cls.kind[s] = StateKind::cycle;
        cls.cycles.push_back(cycle);
      }
    }
    for (const std::uint32_t s : path) color[s] = done;
  }

  // Attractor ids: fixed points first, then cycles.
  std::unordered_map<std::uint32_t, std::uint32_t> attractor_id;
  for (std::size_t idx = 0; idx < count; ++idx) {
    if (cls.kind[idx] == StateKind::fixed) {
      attractor_id.emplace(static_cast<std::uint32_t>(idx),
                           static_cast<std::uint32_t>(cls.fixed_points.size()));
      cls.fixed_points.push_back(static_cast<std::uint32_t>(idx));
    }
  }
  for (std::size_t c = 0; c < cls.cycles.size(); ++c) {
    const auto id = static_cast<std::uint32_t>(cls.fixed_points.size() + c);
    for (const std::uint32_t s : cls.cycles[c]) attractor_id.emplace(s, id);
  }

  cls.basin_size.assign(cls.fixed_points.size() + cls.cycles.size(), 0);
  std::vector<std::int64_t> memo(count, -1);
  for (std::size_t start = 0; start < count; ++start) {
    if (memo[start] >= 0) continue;
    std::vector<std::uint32_t> trail;
    std::uint32_t v = static_cast<std::uint32_t>(start);
    while (memo[v] < 0 && cls.kind[v] == StateKind::transient) {
      trail.push_back(v);
      v = g.sync_edges[v];
    }
    const std::uint32_t id = memo[v] >= 0 ? static_cast<std::uint32_t>(memo[v]) : attractor_id.at(v);
    memo[v] = id;
    for (const std::uint32_t s : trail) memo[s] = id;
  }
  for (std::size_t idx = 0; idx < count; ++idx) {
    cls.attractor_of[idx] = static_cast<std::uint32_t>(memo[idx]);
    cls.basin_size[static_cast<std::size_t>(memo[idx])]++;
  }

  for (const std::uint32_t f : cls.fixed_points) {
    bool is_memory = false;
    for (const std::uint32_t m : g.memory_indices)
      if (m == f) is_memory = true;
    if (!is_memory) cls.spurious.push_back(f);
  }
  return cls;
}

std::string export_dot(const StateGraph& g, bool async_mode,
                       const std::vector<std::string>& header_lines) {
  std::ostringstream out;
  out << "digraph " << (async_mode ? "asynchronous" : "synchronous") << " {\n";
  for (const std::string& line : header_lines) out << "  // " << line << "\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=circle];\n";
  for (std::size_t idx = 0; idx < g.state_count; ++idx) {
    const bool shaded =
        std::find(g.memory_indices.begin(), g.memory_indices.end(), idx) != g.memory_indices.end();
    out << "  s" << (idx + 1) << " [label=\"" << (idx + 1) << "\"";
    if (shaded) out << ", style=filled, fillcolor=gray80";
    out << "];\n";
  }
  for (std::size_t idx = 0; idx < g.state_count; ++idx) {
    if (!async_mode) {
      out << "  s" << (idx + 1) << " -> s" << (g.sync_edges[idx] + 1) << ";\n";
      continue;
    }
    // One edge per neuron whose update moves the state; a self-loop when
    // none does.
    std::vector<std::uint32_t> succ;
    for (std::size_t i = 0; i < g.n_components; ++i) {
      const std::uint32_t to = g.async_edges[idx * g.n_components + i];
      if (to != idx && std::find(succ.begin(), succ.end(), to) == succ.end()) succ.push_back(to);
    }
    if (succ.empty()) {
      out << "  s" << (idx + 1) << " -> s" << (idx + 1) << ";\n";
    } else {
      for (const std::uint32_t to : succ) out << "  s" << (idx + 1) << " -> s" << (to + 1) << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string attractor_csv(const StateGraph& g, const Classification& cls) {
  std::ostringstream out;
  out << "state_index,kind,attractor_id,basin_size\n";
  for (std::size_t idx = 0; idx < g.state_count; ++idx) {
    const char* kind = cls.kind[idx] == StateKind::fixed     ? "fixed"
                       : cls.kind[idx] == StateKind::cycle   ? "cycle"
                                                             : "transient";
    const std::uint32_t id = cls.attractor_of[idx];
    out << (idx + 1) << "," << kind << "," << (id + 1) << "," << cls.basin_size[id] << "\n";
  }
  return out.str();
}

}  // namespace hyperam
