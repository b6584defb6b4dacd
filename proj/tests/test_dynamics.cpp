#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <regex>
#include <set>

#include "hyperam/config.hpp"
#include "hyperam/dynamics.hpp"

using namespace hyperam;

namespace {

struct ExampleSetup {
  NetworkConfig net;
  MemorySet mem;
};

ExampleSetup setup(const std::string& preset_name, double alpha) {
  ExperimentConfig cfg = preset(preset_name);
  cfg.net.excitation.alpha = alpha;
  return {cfg.net, MemorySet::from_vectors(cfg.net.algebra, cfg.memories)};
}

// Attractor structure as plain sets for comparisons.
std::set<std::uint32_t> fixed_set(const Classification& cls) {
  return {cls.fixed_points.begin(), cls.fixed_points.end()};
}

bool trajectory_reaches_fixed_point(const StateGraph& g, const Classification& cls,
                                    std::size_t start) {
  std::size_t v = start;
  for (std::size_t step = 0; step <= g.state_count; ++step) {
    if (cls.kind[v] == StateKind::fixed) return true;
    v = g.sync_edges[v];
  }
  return false;
}

// Minimal structural DOT validation: one digraph block, node statements,
// edge statements, nothing else.
bool dot_parses(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("digraph ", 0) != 0 || line.back() != '{')
    return false;
  const std::regex node_re(R"(\s*s\d+ \[label="\d+"(, style=filled, fillcolor=gray80)?\];)");
  const std::regex edge_re(R"(\s*s\d+ -> s\d+;)");
  const std::regex comment_re(R"(\s*//.*)");
  const std::regex attr_re(R"(\s*(rankdir=LR|node \[shape=circle\]);)");
  bool closed = false;
  while (std::getline(in, line)) {
    if (line == "}") {
      closed = true;
      continue;
    }
    if (closed && !line.empty()) return false;
    if (line.empty()) continue;
    if (!std::regex_match(line, node_re) && !std::regex_match(line, edge_re) &&
        !std::regex_match(line, comment_re) && !std::regex_match(line, attr_re))
      return false;
  }
  return closed;
}

}  // namespace

TEST_CASE("state enumeration counts and order") {
  const StateAlphabet bipolar = alphabet({ActivationKind::bipolar_sign, 2}, 1);
  const auto states16 = enumerate_states(bipolar, 4);
  REQUIRE(states16.size() == 16);
  // Component 1 is the most significant digit; the alphabet runs (-1, +1).
  CHECK(states16[0].flat == std::vector<double>{-1, -1, -1, -1});
  CHECK(states16[15].flat == std::vector<double>{1, 1, 1, 1});
  CHECK(states16[3].flat == std::vector<double>{-1, -1, 1, 1});

  const StateAlphabet phases = alphabet({ActivationKind::csgn, 4}, 2);
  CHECK(enumerate_states(phases, 2).size() == 16);
  CHECK(enumerate_states(bipolar, 1).size() == 2);

  CHECK_THROWS_AS(enumerate_states(bipolar, 40), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_states(alphabet({ActivationKind::continuous_sigma, 2}, 4), 2),
                  std::invalid_argument);
}

TEST_CASE("graph states round-trip through index_of") {
  const auto [net, mem] = setup("example2", 0.5);
  const StateGraph g = build_graph(net, mem);
  for (std::size_t idx = 0; idx < g.state_count; ++idx)
    CHECK(g.index_of(g.state(idx)) == idx);
}

TEST_CASE("bipolar example: all stationary states are fundamental memories") {
  for (const double alpha : {0.25, 1.0}) {
    CAPTURE(alpha);
    const auto [net, mem] = setup("example1", alpha);
    const StateGraph g = build_graph(net, mem);
    REQUIRE(g.state_count == 16);
    // The canonical enumeration puts the memories at states 4, 5, and 13.
    CHECK(g.memory_indices == std::vector<std::uint32_t>{3, 4, 12});

    const Classification cls = classify(g);
    CHECK(fixed_set(cls) == std::set<std::uint32_t>{3, 4, 12});
    CHECK(cls.spurious.empty());
    CHECK(cls.cycles.empty());

    // Same fixed points under per-neuron asynchronous updates.
    for (std::size_t idx = 0; idx < g.state_count; ++idx) {
      const bool sync_fixed = g.sync_edges[idx] == idx;
      CHECK(sync_fixed == g.async_stationary(idx));
    }
  }
}

TEST_CASE("complex example: one spurious memory at [1, 1]") {
  for (const double alpha : {0.5, 1.0}) {
    CAPTURE(alpha);
    const auto [net, mem] = setup("example2", alpha);
    const StateGraph g = build_graph(net, mem);
    CHECK(g.memory_indices == std::vector<std::uint32_t>{3, 4, 12});

    const Classification cls = classify(g);
    CHECK(fixed_set(cls) == std::set<std::uint32_t>{0, 3, 4, 12});
    REQUIRE(cls.spurious.size() == 1);
    CHECK(cls.spurious[0] == 0);  // the first state, [1, 1]
    const HVector s1 = g.state(0);
    CHECK(s1.flat == std::vector<double>{1, 0, 1, 0});
    CHECK(cls.cycles.empty());
  }
}

TEST_CASE("hyperbolic example: a cycle through the second and third memories") {
  for (const double alpha : {0.5, 1.0}) {
    CAPTURE(alpha);
    const auto [net, mem] = setup("example3", alpha);
    const StateGraph g = build_graph(net, mem);
    const Classification cls = classify(g);
    bool found = false;
    for (const auto& cycle : cls.cycles) {
      const std::set<std::uint32_t> members(cycle.begin(), cycle.end());
      if (members.count(g.memory_indices[1]) && members.count(g.memory_indices[2])) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("conjugated csgn example: convergent but the first memory is lost") {
  const auto [net, mem] = setup("example4", 1.0);
  const StateGraph g = build_graph(net, mem);
  const Classification cls = classify(g);
  CHECK(cls.cycles.empty());
  for (std::size_t idx = 0; idx < g.state_count; ++idx)
    CHECK(trajectory_reaches_fixed_point(g, cls, idx));
  // u^1 is not a stationary state.
  CHECK(fixed_set(cls).count(g.memory_indices[0]) == 0);
}

TEST_CASE("twin-multistate single neuron mirrors the complex two-neuron dynamic") {
  const auto [net2, mem2] = setup("example2", 0.5);
  const auto [net5, mem5] = setup("example5", 0.5);
  const StateGraph complex_graph = build_graph(net2, mem2);
  const StateGraph twin_graph = build_graph(net5, mem5);
  REQUIRE(twin_graph.state_count == 16);
  // Pairing q = z0 + z1 j maps twin states to complex state pairs with
  // identical canonical indices.
  CHECK(twin_graph.sync_edges == complex_graph.sync_edges);
  CHECK(twin_graph.memory_indices == complex_graph.memory_indices);
}

TEST_CASE("classification is invariant under relabeling the alphabet") {
  const auto [net, mem] = setup("example2", 0.5);
  const StateGraph g = build_graph(net, mem);
  const Classification cls = classify(g);

  // Reverse the alphabet: digit d becomes base-1-d, giving the state
  // permutation of a re-enumeration with reversed element order.
  const std::size_t base = g.alph.elements.size();
  auto relabel = [&](std::size_t idx) {
    std::size_t out = 0;
    std::vector<std::size_t> digits(g.n_components);
    for (std::size_t i = g.n_components; i-- > 0;) {
      digits[i] = idx % base;
      idx /= base;
    }
    for (std::size_t i = 0; i < g.n_components; ++i)
      out = out * base + (base - 1 - digits[i]);
    return static_cast<std::uint32_t>(out);
  };

  StateGraph permuted = g;
  for (std::size_t idx = 0; idx < g.state_count; ++idx)
    permuted.sync_edges[relabel(idx)] = relabel(g.sync_edges[idx]);
  for (std::size_t idx = 0; idx < g.state_count; ++idx)
    for (std::size_t i = 0; i < g.n_components; ++i)
      permuted.async_edges[relabel(idx) * g.n_components + i] =
          relabel(g.async_edges[idx * g.n_components + i]);
  permuted.memory_indices.clear();
  for (const std::uint32_t m : g.memory_indices) permuted.memory_indices.push_back(relabel(m));

  const Classification pcls = classify(permuted);
  CHECK(pcls.fixed_points.size() == cls.fixed_points.size());
  CHECK(pcls.spurious.size() == cls.spurious.size());
  CHECK(pcls.cycles.size() == cls.cycles.size());
  std::set<std::uint32_t> relabeled_fixed;
  for (const std::uint32_t f : cls.fixed_points) relabeled_fixed.insert(relabel(f));
  CHECK(fixed_set(pcls) == relabeled_fixed);
}

TEST_CASE("basins cover the state space") {
  for (const char* name : {"example1", "example2", "example4"}) {
    const auto [net, mem] = setup(name, 1.0);
    const StateGraph g = build_graph(net, mem);
    const Classification cls = classify(g);
    std::size_t total = 0;
    for (const std::size_t b : cls.basin_size) total += b;
    CHECK(total == g.state_count);
  }
}

TEST_CASE("DOT export") {
  const auto [net, mem] = setup("example1", 0.25);
  const StateGraph g = build_graph(net, mem);
  const std::string sync_dot = export_dot(g, false, {"alpha = 0.25"});
  CHECK(dot_parses(sync_dot));
  // 16 nodes, 3 of them shaded memories.
  CHECK(std::count(sync_dot.begin(), sync_dot.end(), '[') >= 16);
  std::size_t shaded = 0, pos = 0;
  while ((pos = sync_dot.find("fillcolor=gray80", pos)) != std::string::npos) {
    ++shaded;
    pos += 1;
  }
  CHECK(shaded == 3);

  const std::string async_dot = export_dot(g, true);
  CHECK(dot_parses(async_dot));
  CHECK(async_dot.find("digraph asynchronous") == 0);
}

TEST_CASE("attractor CSV schema") {
  const auto [net, mem] = setup("example2", 0.5);
  const StateGraph g = build_graph(net, mem);
  const Classification cls = classify(g);
  const std::string csv = attractor_csv(g, cls);
  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "state_index,kind,attractor_id,basin_size");
  std::size_t rows = 0, fixed_rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find(",fixed,") != std::string::npos) ++fixed_rows;
  }
  CHECK(rows == 16);
  CHECK(fixed_rows == 4);
  CHECK(csv.find("1,fixed,") == csv.find('\n') + 1);  // state 1 is the spurious fixed point
}

TEST_CASE("exhaustive convergence for stable configurations") {
  for (const char* name : {"example1", "example2", "example5"}) {
    CAPTURE(name);
    const auto [net, mem] = setup(name, 1.0);
    const StateGraph g = build_graph(net, mem);
    const Classification cls = classify(g);
    for (std::size_t idx = 0; idx < g.state_count; ++idx)
      CHECK(trajectory_reaches_fixed_point(g, cls, idx));
  }
}
