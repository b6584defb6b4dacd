#include "hyperam/rcnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "hyperam/kernels.hpp"

namespace hyperam {

namespace {

// A component counts as changed when some coefficient moved by more than
// this. Discrete codomain elements are far apart, so for them this is exact
// comparison; it is what lets the continuous sigma activation settle.
constexpr double kChangeTol = 1e-12;

constexpr double kExactMatchTol = 1e-12;

constexpr std::size_t kVisitedCap = std::size_t{1} << 20;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool component_changed(std::span<const double> a, std::span<const double> b) {
  for (std::size_t j = 0; j < a.size(); ++j)
    if (std::abs(a[j] - b[j]) > kChangeTol) return true;
  return false;
}

struct EngineContext {
  const NetworkConfig* cfg = nullptr;
  const MemorySet* mem = nullptr;
  StateAlphabet alph;
  std::optional<std::vector<double>> metric;  // per-coefficient bilinear weights
  bool metric_trivial = false;                // metric present and all ones
  double scale = 0.0;                         // n * max_s B(s, s)
};

double max_self_bilinear(const NetworkConfig& cfg, const StateAlphabet& alph) {
  if (alph.unit_sphere) return 1.0;
  double m = -std::numeric_limits<double>::infinity();
  for (const HNumber& s : alph.elements)
    m = std::max(m, bilinear(cfg.algebra, cfg.involution, s, s));
  return m;
}

EngineContext make_context(const NetworkConfig& cfg, const MemorySet& mem) {
  EngineContext ctx;
  ctx.cfg = &cfg;
  ctx.mem = &mem;
  const std::size_t want = expected_dim(cfg.activation);
  require(want == 0 || want == cfg.algebra.dim(), "activation/algebra dimension mismatch");
  require(mem.algebra.dim() == cfg.algebra.dim(), "memory/algebra dimension mismatch");
  ctx.alph = alphabet(cfg.activation, cfg.algebra.dim());
  ctx.metric = diagonal_metric(cfg.algebra, cfg.involution);
  if (ctx.metric) {
    ctx.metric_trivial =
        std::all_of(ctx.metric->begin(), ctx.metric->end(), [](double g) { return g == 1.0; });
  }
  ctx.scale = static_cast<double>(mem.n) * max_self_bilinear(cfg, ctx.alph);
  return ctx;
}

std::vector<double> correlations_ctx(const EngineContext& ctx, const HVector& x) {
  const MemorySet& mem = *ctx.mem;
  require(x.size() == mem.n && x.dim == mem.algebra.dim(), "state/memory shape mismatch");
  const std::size_t p = mem.count();
  const std::size_t len = x.flat.size();
  std::vector<double> c(p, 0.0);
  const auto& k = kernels::active();
  if (ctx.metric) {
    const double* rhs = x.flat.data();
    std::vector<double> gx;
    if (!ctx.metric_trivial) {
      gx.resize(len);
      const std::vector<double>& g = *ctx.metric;
      const std::size_t dim = x.dim;
      std::vector<double> tiled(len);
      for (std::size_t i = 0; i < len; ++i) tiled[i] = g[i % dim];
      k.hadamard(gx.data(), tiled.data(), x.flat.data(), len);
      rhs = gx.data();
    }
    for (std::size_t xi = 0; xi < p; ++xi)
      c[xi] = k.dot(mem.memory_span(xi).data(), rhs, len);
    return c;
  }
  // General table: fall back to the literal bilinear form per component.
  for (std::size_t xi = 0; xi < p; ++xi) {
    const HVector u = mem.memory(xi);
    double acc = 0.0;
    for (std::size_t i = 0; i < mem.n; ++i)
      acc += bilinear(mem.algebra, ctx.cfg->involution, u.component(i), x.component(i));
    c[xi] = acc;
  }
  return c;
}

// B(u, v) for single components given the context's metric (or the general
// bilinear form).
double component_bilinear(const EngineContext& ctx, std::span<const double> u,
                          std::span<const double> v) {
  if (ctx.metric) {
    const std::vector<double>& g = *ctx.metric;
    double acc = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) acc += g[j] * u[j] * v[j];
    return acc;
  }
  HNumber a(u.size()), b(v.size());
  std::copy(u.begin(), u.end(), a.c.begin());
  std::copy(v.begin(), v.end(), b.c.begin());
  return bilinear(ctx.cfg->algebra, ctx.cfg->involution, a, b);
}

Weights excite_ctx(const EngineContext& ctx, std::span<const double> c) {
  return excite(ctx.cfg->excitation, c, ctx.scale);
}

HVector potentials_ctx(const EngineContext& ctx, std::span<const double> w) {
  const MemorySet& mem = *ctx.mem;
  HVector h(mem.n, mem.algebra.dim());
  const auto& k = kernels::active();
  for (std::size_t xi = 0; xi < mem.count(); ++xi)
    k.axpy(h.flat.data(), w[xi], mem.memory_span(xi).data(), h.flat.size());
  return h;
}

// Potential of a single component from the weight vector.
void component_potential(const EngineContext& ctx, std::span<const double> w, std::size_t i,
                         HNumber& out) {
  const MemorySet& mem = *ctx.mem;
  const std::size_t dim = mem.algebra.dim();
  std::fill(out.c.begin(), out.c.end(), 0.0);
  for (std::size_t xi = 0; xi < mem.count(); ++xi) {
    const double* u = mem.memory_span(xi).data() + i * dim;
    for (std::size_t j = 0; j < dim; ++j) out[j] += w[xi] * u[j];
  }
}

std::pair<HVector, std::size_t> step_sync_ctx(const EngineContext& ctx, const HVector& x) {
  const MemorySet& mem = *ctx.mem;
  const std::vector<double> c = correlations_ctx(ctx, x);
  const Weights weights = excite_ctx(ctx, c);
  if (weights.exact_match) {
    const HVector u = mem.memory(*weights.exact_match);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < mem.n; ++i)
      if (component_changed(u.component_span(i), x.component_span(i))) ++changed;
    return {u, changed};
  }
  const HVector h = potentials_ctx(ctx, weights.w);
  HVector next = x;
  std::size_t changed = 0;
  for (std::size_t i = 0; i < mem.n; ++i) {
    const auto v = apply(ctx.cfg->activation, h.component(i));
    if (!v) continue;  // out of domain: keep the previous state
    if (component_changed(std::span<const double>(v->c), x.component_span(i))) {
      next.set_component(i, *v);
      ++changed;
    }
  }
  return {next, changed};
}

void update_weight_cache_ctx(const EngineContext& ctx, std::size_t i, const HNumber& before,
                             const HNumber& after, std::span<double> w) {
  const MemorySet& mem = *ctx.mem;
  const HNumber delta = sub(after, before);
  const std::size_t dim = mem.algebra.dim();
  for (std::size_t xi = 0; xi < mem.count(); ++xi) {
    const double* u = mem.memory_span(xi).data() + i * dim;
    const double db = component_bilinear(ctx, {u, dim}, {delta.c.data(), dim});
    w[xi] *= std::exp(ctx.cfg->excitation.alpha * db);
  }
}

bool step_async_ctx(const EngineContext& ctx, HVector& x, std::size_t i,
                    std::vector<double>* w_cache) {
  const MemorySet& mem = *ctx.mem;
  require(i < mem.n, "neuron index out of range");
  HNumber target(x.dim);
  if (w_cache && ctx.cfg->excitation.kind == ExcitationKind::exponential) {
    component_potential(ctx, *w_cache, i, target);
  } else {
    const std::vector<double> c = correlations_ctx(ctx, x);
    const Weights weights = excite_ctx(ctx, c);
    if (weights.exact_match) {
      target = mem.memory(*weights.exact_match).component(i);
      if (!component_changed(std::span<const double>(target.c), x.component_span(i)))
        return false;
      x.set_component(i, target);
      return true;
    }
    component_potential(ctx, weights.w, i, target);
  }
  const auto v = apply(ctx.cfg->activation, target);
  if (!v) return false;
  if (!component_changed(std::span<const double>(v->c), x.component_span(i))) return false;
  if (w_cache && ctx.cfg->excitation.kind == ExcitationKind::exponential) {
    const HNumber before = x.component(i);
    update_weight_cache_ctx(ctx, i, before, *v, *w_cache);
  }
  x.set_component(i, *v);
  return true;
}

double energy_ctx(const EngineContext& ctx, const HVector& x) {
  const std::vector<double> c = correlations_ctx(ctx, x);
  double sum = 0.0;
  for (const double ci : c) {
    const double fi = energy_primitive(ctx.cfg->excitation, ci, ctx.scale);
    if (std::isinf(fi)) return -std::numeric_limits<double>::infinity();
    sum += fi;
  }
  return -sum;
}

std::string state_key(const HVector& x) {
  std::string key(reinterpret_cast<const char*>(x.flat.data()),
                  x.flat.size() * sizeof(double));
  return key;
}

}  // namespace

const char* to_string(ExcitationKind k) {
  switch (k) {
    case ExcitationKind::identity: return "identity";
    case ExcitationKind::high_order: return "high_order";
    case ExcitationKind::potential: return "potential";
    case ExcitationKind::exponential: return "exponential";
  }
  return "?";
}

ExcitationKind excitation_kind_from_string(const std::string& s) {
  if (s == "identity") return ExcitationKind::identity;
  if (s == "high_order") return ExcitationKind::high_order;
  if (s == "potential") return ExcitationKind::potential;
  if (s == "exponential") return ExcitationKind::exponential;
  throw std::invalid_argument("unknown excitation kind: " + s);
}

const char* to_string(UpdateMode m) {
  return m == UpdateMode::synchronous ? "synchronous" : "asynchronous";
}

const char* to_string(AsyncOrder o) {
  return o == AsyncOrder::cyclic ? "cyclic" : "random";
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::cycled: return "cycled";
    case RunStatus::max_sweeps_reached: return "max_sweeps_reached";
  }
  return "?";
}

HVector MemorySet::memory(std::size_t xi) const {
  HVector v(n, algebra.dim());
  const auto src = memory_span(xi);
  std::copy(src.begin(), src.end(), v.flat.begin());
  return v;
}

MemorySet MemorySet::from_vectors(const Algebra& alg, const std::vector<HVector>& memories) {
  require(!memories.empty(), "memory set must not be empty");
  MemorySet mem;
  mem.algebra = alg;
  mem.n = memories.front().size();
  for (const HVector& u : memories) {
    require(u.dim == alg.dim(), "memory coefficient dimension mismatch");
    require(u.size() == mem.n, "memories must share one length");
    mem.flat.insert(mem.flat.end(), u.flat.begin(), u.flat.end());
  }
  return mem;
}

void require_in_codomain(const Activation& act, const StateAlphabet& alph, const HVector& x,
                         const char* what) {
  constexpr double kTol = 1e-9;
  (void)act;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto s = x.component_span(i);
    if (alph.unit_sphere) {
      double norm2 = 0.0;
      for (double v : s) norm2 += v * v;
      if (std::abs(std::sqrt(norm2) - 1.0) > kTol)
        throw std::invalid_argument(std::string(what) + ": component off the unit sphere");
      continue;
    }
    bool found = false;
    for (const HNumber& e : alph.elements) {
      double worst = 0.0;
      for (std::size_t j = 0; j < s.size(); ++j)
        worst = std::max(worst, std::abs(e[j] - s[j]));
      if (worst <= kTol) {
        found = true;
        break;
      }
    }
    if (!found)
      throw std::invalid_argument(std::string(what) + ": component not in the codomain");
  }
}

void validate_memories(const NetworkConfig& cfg, const MemorySet& mem) {
  const StateAlphabet alph = alphabet(cfg.activation, cfg.algebra.dim());
  for (std::size_t xi = 0; xi < mem.count(); ++xi)
    require_in_codomain(cfg.activation, alph, mem.memory(xi), "stored memory");
}

std::vector<double> correlations(const NetworkConfig& cfg, const MemorySet& mem,
                                 const HVector& x) {
  return correlations_ctx(make_context(cfg, mem), x);
}

std::vector<double> correlations_reference(const NetworkConfig& cfg, const MemorySet& mem,
                                           const HVector& x) {
  require(x.size() == mem.n && x.dim == mem.algebra.dim(), "state/memory shape mismatch");
  std::vector<double> c(mem.count(), 0.0);
  for (std::size_t xi = 0; xi < mem.count(); ++xi) {
    double acc = 0.0;
    for (std::size_t i = 0; i < mem.n; ++i) {
      const HNumber u = mem.memory(xi).component(i);
      acc += real_of_product(cfg.algebra, involute(cfg.involution, u), x.component(i));
    }
    c[xi] = acc;
  }
  return c;
}

double codomain_scale(const NetworkConfig& cfg, std::size_t n) {
  const StateAlphabet alph = alphabet(cfg.activation, cfg.algebra.dim());
  return static_cast<double>(n) * max_self_bilinear(cfg, alph);
}

Weights excite(const Excitation& f, std::span<const double> c, double scale) {
  Weights out;
  out.w.resize(c.size());
  switch (f.kind) {
    case ExcitationKind::identity:
      std::copy(c.begin(), c.end(), out.w.begin());
      return out;
    case ExcitationKind::high_order:
      require(f.order > 1.0, "high_order excitation needs order q > 1");
      for (std::size_t xi = 0; xi < c.size(); ++xi)
        out.w[xi] = std::pow(1.0 + c[xi] / scale, f.order);
      break;
    case ExcitationKind::potential: {
      require(f.depth >= 1.0, "potential excitation needs L >= 1");
      std::size_t best = 0;
      for (std::size_t xi = 0; xi < c.size(); ++xi)
        if (c[xi] > c[best]) best = xi;
      if (c[best] / scale >= 1.0 - kExactMatchTol) {
        out.exact_match = best;
        return out;
      }
      for (std::size_t xi = 0; xi < c.size(); ++xi)
        out.w[xi] = 1.0 / std::pow(1.0 - c[xi] / scale, f.depth);
      break;
    }
    case ExcitationKind::exponential: {
      require(f.alpha > 0.0 && f.beta > 0.0, "exponential excitation needs alpha, beta > 0");
      double shift = 0.0;
      if (f.normalize) shift = *std::max_element(c.begin(), c.end());
      for (std::size_t xi = 0; xi < c.size(); ++xi)
        out.w[xi] = f.beta * std::exp(f.alpha * (c[xi] - shift));
      break;
    }
  }
  for (std::size_t xi = 0; xi < out.w.size(); ++xi) {
    if (!std::isfinite(out.w[xi])) {
      std::ostringstream msg;
      msg << "excitation weight overflow at memory " << (xi + 1);
      throw std::overflow_error(msg.str());
    }
  }
  return out;
}

HVector potentials(const MemorySet& mem, std::span<const double> w) {
  require(w.size() == mem.count(), "weight/memory count mismatch");
  HVector h(mem.n, mem.algebra.dim());
  const auto& k = kernels::active();
  for (std::size_t xi = 0; xi < mem.count(); ++xi)
    k.axpy(h.flat.data(), w[xi], mem.memory_span(xi).data(), h.flat.size());
  return h;
}

std::vector<double> init_weights(const NetworkConfig& cfg, const MemorySet& mem,
                                 const HVector& x) {
  const EngineContext ctx = make_context(cfg, mem);
  const Weights weights = excite_ctx(ctx, correlations_ctx(ctx, x));
  require(!weights.exact_match.has_value(), "init_weights: potential excitation at its singularity");
  return weights.w;
}

void update_weight_cache(const NetworkConfig& cfg, const MemorySet& mem, std::size_t i,
                         const HNumber& before, const HNumber& after, std::span<double> w) {
  require(cfg.excitation.kind == ExcitationKind::exponential,
          "incremental weight update applies to the exponential excitation");
  update_weight_cache_ctx(make_context(cfg, mem), i, before, after, w);
}

std::pair<HVector, std::size_t> step_sync(const NetworkConfig& cfg, const MemorySet& mem,
                                          const HVector& x) {
  return step_sync_ctx(make_context(cfg, mem), x);
}

bool step_async(const NetworkConfig& cfg, const MemorySet& mem, HVector& x, std::size_t i,
                std::vector<double>* w_cache) {
  return step_async_ctx(make_context(cfg, mem), x, i, w_cache);
}

double energy_primitive(const Excitation& f, double c, double scale) {
  switch (f.kind) {
    case ExcitationKind::exponential:
      return (f.beta / f.alpha) * std::exp(f.alpha * c);
    case ExcitationKind::identity:
      return c * c / 2.0;
    case ExcitationKind::high_order:
      return scale * std::pow(1.0 + c / scale, f.order + 1.0) / (f.order + 1.0);
    case ExcitationKind::potential: {
      const double y = c / scale;
      if (y >= 1.0 - kExactMatchTol) return std::numeric_limits<double>::infinity();
      if (f.depth == 1.0) return scale * std::log(1.0 / (1.0 - y));
      return scale * std::pow(1.0 - y, 1.0 - f.depth) / (f.depth - 1.0);
    }
  }
  return 0.0;
}

double energy(const NetworkConfig& cfg, const MemorySet& mem, const HVector& x) {
  return energy_ctx(make_context(cfg, mem), x);
}

RunResult run(const NetworkConfig& cfg, const MemorySet& mem, const HVector& x0) {
  const EngineContext ctx = make_context(cfg, mem);
  require_in_codomain(cfg.activation, ctx.alph, x0, "initial state");

  RunResult res;
  res.final_state = x0;
  HVector& x = res.final_state;
  res.energy_trace.emplace_back(0.0, energy_ctx(ctx, x));

  const bool track_cycles =
      cfg.update == UpdateMode::synchronous || cfg.async_order == AsyncOrder::cyclic;
  std::unordered_map<std::string, std::size_t> visited;
  std::vector<HVector> stored;
  if (track_cycles) {
    visited.emplace(state_key(x), 0);
    stored.push_back(x);
  }

  std::mt19937_64 order_rng(cfg.seed);
  std::vector<std::size_t> order(mem.n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> w_cache;
  const bool use_cache = cfg.update == UpdateMode::asynchronous &&
                         cfg.excitation.kind == ExcitationKind::exponential;
  if (use_cache) w_cache = init_weights(cfg, mem, x);

  for (std::size_t sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    ++res.sweeps_executed;
    std::size_t changed = 0;
    if (cfg.update == UpdateMode::synchronous) {
      auto [next, n_changed] = step_sync_ctx(ctx, x);
      changed = n_changed;
      if (changed > 0) {
        x = next;
        res.settle_time = static_cast<double>(sweep);
      }
    } else {
      if (cfg.async_order == AsyncOrder::random_order)
        std::shuffle(order.begin(), order.end(), order_rng);
      for (std::size_t pos = 0; pos < order.size(); ++pos) {
        if (step_async_ctx(ctx, x, order[pos], use_cache ? &w_cache : nullptr)) {
          ++changed;
          res.settle_time = static_cast<double>(sweep - 1) +
                            static_cast<double>(pos + 1) / static_cast<double>(mem.n);
        }
      }
    }

    if (changed == 0) {
      res.status = RunStatus::converged;
      return res;
    }
    ++res.sweeps_used;
    res.energy_trace.emplace_back(static_cast<double>(sweep), energy_ctx(ctx, x));

    if (track_cycles && visited.size() < kVisitedCap) {
      const std::string key = state_key(x);
      const auto it = visited.find(key);
      if (it != visited.end()) {
        res.status = RunStatus::cycled;
        res.cycle_period = stored.size() - it->second;
        res.cycle_states.assign(stored.begin() + static_cast<std::ptrdiff_t>(it->second),
                                stored.end());
        return res;
      }
      visited.emplace(key, stored.size());
      stored.push_back(x);
    }
  }
  res.status = RunStatus::max_sweeps_reached;
  return res;
}

HVector random_state_vector(const NetworkConfig& cfg, std::size_t n, std::mt19937_64& rng) {
  const StateAlphabet alph = alphabet(cfg.activation, cfg.algebra.dim());
  HVector x(n, cfg.algebra.dim());
  for (std::size_t i = 0; i < n; ++i) x.set_component(i, random_state(alph, rng));
  return x;
}

MemorySet random_memories(const NetworkConfig& cfg, std::size_t n, std::size_t p,
                          std::mt19937_64& rng) {
  std::vector<HVector> memories;
  memories.reserve(p);
  for (std::size_t xi = 0; xi < p; ++xi) memories.push_back(random_state_vector(cfg, n, rng));
  return MemorySet::from_vectors(cfg.algebra, memories);
}

}  // namespace hyperam
