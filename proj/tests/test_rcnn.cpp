#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hyperam/rcnn.hpp"

using namespace hyperam;

namespace {

HVector from_coeffs(std::size_t dim, std::initializer_list<double> coeffs) {
  HVector v(coeffs.size() / dim, dim);
  std::copy(coeffs.begin(), coeffs.end(), v.flat.begin());
  return v;
}

// Memory set of the first worked example: three bipolar patterns of length 4.
MemorySet bipolar_example() {
  return MemorySet::from_vectors(Algebra::reals(), {
                                                       from_coeffs(1, {-1, -1, 1, 1}),
                                                       from_coeffs(1, {-1, 1, -1, -1}),
                                                       from_coeffs(1, {1, 1, -1, -1}),
                                                   });
}

NetworkConfig bipolar_config(double alpha, double beta) {
  NetworkConfig cfg;
  cfg.algebra = Algebra::reals();
  cfg.involution = Involution::trivial;
  cfg.activation = {ActivationKind::bipolar_sign, 2};
  cfg.excitation = {ExcitationKind::exponential, alpha, beta, 2.0, 1.0, false};
  return cfg;
}

// [1, -i], [i, 1], [-i, 1] over a two-dimensional algebra.
std::vector<HVector> phase_example_memories() {
  return {
      from_coeffs(2, {1, 0, 0, -1}),
      from_coeffs(2, {0, 1, 1, 0}),
      from_coeffs(2, {0, -1, 1, 0}),
  };
}

NetworkConfig hyperbolic_csgn_config(double alpha) {
  NetworkConfig cfg;
  cfg.algebra = Algebra::hyperbolic();
  cfg.involution = Involution::natural;
  cfg.activation = {ActivationKind::csgn, 4};
  cfg.excitation = {ExcitationKind::exponential, alpha, 1.0, 2.0, 1.0, false};
  return cfg;
}

// Literal implementation of the update map straight from the defining
// equations (general multiplication + involution, no kernels, no metric, no
// caching). Oracle for the engine path.
HVector naive_step_sync(const NetworkConfig& cfg, const MemorySet& mem, const HVector& x) {
  const std::size_t p = mem.count();
  std::vector<double> w(p, 0.0);
  for (std::size_t xi = 0; xi < p; ++xi) {
    double c = 0.0;
    const HVector u = mem.memory(xi);
    for (std::size_t i = 0; i < mem.n; ++i)
      c += real_of_product(cfg.algebra, involute(cfg.involution, u.component(i)), x.component(i));
    switch (cfg.excitation.kind) {
      case ExcitationKind::identity: w[xi] = c; break;
      case ExcitationKind::exponential:
        w[xi] = cfg.excitation.beta * std::exp(cfg.excitation.alpha * c);
        break;
      default: REQUIRE(false);
    }
  }
  HVector next = x;
  for (std::size_t i = 0; i < mem.n; ++i) {
    HNumber h(x.dim);
    for (std::size_t xi = 0; xi < p; ++xi)
      h = add(h, scaled(mem.memory(xi).component(i), w[xi]));
    const auto v = apply(cfg.activation, h);
    if (v) next.set_component(i, *v);
  }
  return next;
}

struct RandomConfigCase {
  NetworkConfig cfg;
  std::size_t dim;
};

std::vector<RandomConfigCase> family_configs() {
  std::vector<RandomConfigCase> cases;
  {
    NetworkConfig c = bipolar_config(0.4, 1.0);
    cases.push_back({c, 1});
  }
  {
    NetworkConfig c;
    c.algebra = Algebra::complex_numbers();
    c.involution = Involution::natural;
    c.activation = {ActivationKind::csgn, 8};
    c.excitation = {ExcitationKind::exponential, 0.5, 1.0, 2.0, 1.0, false};
    cases.push_back({c, 2});
  }
  {
    NetworkConfig c;
    c.algebra = Algebra::quaternions();
    c.involution = Involution::natural;
    c.activation = {ActivationKind::twin_multistate, 4};
    c.excitation = {ExcitationKind::exponential, 0.3, 1.0, 2.0, 1.0, false};
    cases.push_back({c, 4});
  }
  {
    NetworkConfig c;
    c.algebra = Algebra::octonions();
    c.involution = Involution::natural;
    c.activation = {ActivationKind::split_sign, 2};
    c.excitation = {ExcitationKind::exponential, 0.1, 1.0, 2.0, 1.0, false};
    cases.push_back({c, 8});
  }
  {
    NetworkConfig c;
    c.algebra = Algebra::octonions();
    c.involution = Involution::natural;
    c.activation = {ActivationKind::continuous_sigma, 2};
    c.excitation = {ExcitationKind::exponential, 0.5, 1.0, 2.0, 1.0, false};
    cases.push_back({c, 8});
  }
  return cases;
}

}  // namespace

TEST_CASE("correlations of the bipolar example") {
  const MemorySet mem = bipolar_example();
  const NetworkConfig cfg = bipolar_config(0.25, 1.0);
  const auto c = correlations(cfg, mem, mem.memory(0));
  REQUIRE(c.size() == 3);
  CHECK(c[0] == 4.0);
  CHECK(c[1] == -2.0);
  CHECK(c[2] == -4.0);

  // Self-correlation is N * B(s, s).
  CHECK(correlations(cfg, mem, mem.memory(1))[1] == 4.0);

  const MemorySet ortho = MemorySet::from_vectors(
      Algebra::reals(), {from_coeffs(1, {1, 1, -1, -1}), from_coeffs(1, {1, -1, 1, -1})});
  CHECK(correlations(cfg, ortho, ortho.memory(0))[1] == 0.0);
}

TEST_CASE("kernel correlations match the reference route") {
  std::mt19937_64 rng(101);
  for (const auto& [cfg, dim] : family_configs()) {
    CAPTURE(cfg.algebra.name());
    for (int rep = 0; rep < 10; ++rep) {
      std::mt19937_64 gen(rng());
      const MemorySet mem = random_memories(cfg, 17, 5, gen);
      const HVector x = random_state_vector(cfg, 17, gen);
      const auto fast = correlations(cfg, mem, x);
      const auto ref = correlations_reference(cfg, mem, x);
      for (std::size_t xi = 0; xi < fast.size(); ++xi)
        CHECK(fast[xi] == doctest::Approx(ref[xi]).epsilon(1e-12));
    }
  }
}

TEST_CASE("excitation functions") {
  const std::vector<double> c{4, -2, -4};
  const double scale = 4.0;

  const Weights ident = excite({ExcitationKind::identity}, c, scale);
  CHECK(ident.w == std::vector<double>{4, -2, -4});

  Excitation expo{ExcitationKind::exponential, 0.25, 1.0, 2.0, 1.0, false};
  const Weights we = excite(expo, c, scale);
  CHECK(we.w[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(we.w[1] == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(we.w[2] == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  expo.normalize = true;
  const Weights wn = excite(expo, c, scale);
  CHECK(wn.w[0] == doctest::Approx(1.0));
  CHECK(wn.w[1] == doctest::Approx(std::exp(-1.5)));
  CHECK(wn.w[2] == doctest::Approx(std::exp(-2.0)));
  // Ratios match the unnormalized weights.
  CHECK(wn.w[1] / wn.w[0] == doctest::Approx(we.w[1] / we.w[0]).epsilon(1e-14));

  const Weights high = excite({ExcitationKind::high_order, 1, 1, 3.0, 1, false}, c, scale);
  CHECK(high.w[0] == doctest::Approx(8.0));
  CHECK(high.w[1] == doctest::Approx(0.125));

  const Weights pot = excite({ExcitationKind::potential, 1, 1, 2, 2.0, false},
                             std::vector<double>{2, -2}, scale);
  CHECK(pot.w[0] == doctest::Approx(4.0));
  CHECK(!pot.exact_match.has_value());

  const Weights match = excite({ExcitationKind::potential, 1, 1, 2, 1.0, false}, c, scale);
  REQUIRE(match.exact_match.has_value());
  CHECK(*match.exact_match == 0);

  CHECK_THROWS_AS(excite({ExcitationKind::exponential, 1000.0, 1.0, 2, 1, false}, c, scale),
                  std::overflow_error);
}

TEST_CASE("energy primitive is an antiderivative of the excitation") {
  const double scale = 12.0;
  const Excitation kinds[] = {
      {ExcitationKind::identity, 1, 1, 2, 1, false},
      {ExcitationKind::exponential, 0.4, 0.7, 2, 1, false},
      {ExcitationKind::high_order, 1, 1, 3.0, 1, false},
      {ExcitationKind::potential, 1, 1, 2, 1.0, false},
      {ExcitationKind::potential, 1, 1, 2, 2.5, false},
  };
  for (const Excitation& f : kinds) {
    CAPTURE(to_string(f.kind));
    for (const double c : {-6.0, -1.0, 0.0, 2.0, 7.5}) {
      const double h = 1e-5;
      const double deriv =
          (energy_primitive(f, c + h, scale) - energy_primitive(f, c - h, scale)) / (2 * h);
      const double w = excite(f, std::vector<double>{c}, scale).w[0];
      CHECK(deriv == doctest::Approx(w).epsilon(1e-6));
    }
  }
}

TEST_CASE("potentials") {
  const MemorySet mem = bipolar_example();
  const HVector h1 = potentials(mem, std::vector<double>{1, 0, 0});
  CHECK(h1 == mem.memory(0));
  const HVector h0 = potentials(mem, std::vector<double>{0, 0, 0});
  CHECK(h0.flat == std::vector<double>(4, 0.0));

  // At x = u^1 with the example's exponential weights, sign(h) recovers u^1.
  const NetworkConfig cfg = bipolar_config(0.25, 1.0);
  const auto w = init_weights(cfg, mem, mem.memory(0));
  const HVector h = potentials(mem, w);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK((h.flat[i] > 0 ? 1.0 : -1.0) == mem.memory(0).flat[i]);
}

TEST_CASE("synchronous step against the literal oracle") {
  std::mt19937_64 rng(211);
  for (const auto& [cfg, dim] : family_configs()) {
    CAPTURE(cfg.algebra.name());
    for (int rep = 0; rep < 20; ++rep) {
      std::mt19937_64 gen(rng());
      const MemorySet mem = random_memories(cfg, 9, 4, gen);
      HVector x = random_state_vector(cfg, 9, gen);
      for (int step = 0; step < 3; ++step) {
        const HVector expect = naive_step_sync(cfg, mem, x);
        const HVector got = step_sync(cfg, mem, x).first;
        if (cfg.activation.kind == ActivationKind::continuous_sigma) {
          for (std::size_t j = 0; j < got.flat.size(); ++j)
            CHECK(got.flat[j] == doctest::Approx(expect.flat[j]).epsilon(1e-9));
        } else {
          CHECK(got == expect);
        }
        x = got;
      }
    }
  }
}

TEST_CASE("fixed points are stationary") {
  const MemorySet mem = bipolar_example();
  for (const double alpha : {0.25, 1.0}) {
    const NetworkConfig cfg = bipolar_config(alpha, 1.0);
    for (std::size_t xi = 0; xi < 3; ++xi) {
      const auto [next, changed] = step_sync(cfg, mem, mem.memory(xi));
      CHECK(changed == 0);
      CHECK(next == mem.memory(xi));
    }
  }
}

TEST_CASE("frozen energy value of the bipolar example") {
  const MemorySet mem = bipolar_example();
  const NetworkConfig cfg = bipolar_config(0.25, 1.0);
  // c = (4, -2, -4): E = -(beta/alpha) * sum exp(alpha c)
  //                    = -4 (e + e^{-1/2} + e^{-1})
  const double expect = -4.0 * (std::exp(1.0) + std::exp(-0.5) + std::exp(-1.0));
  CHECK(energy(cfg, mem, mem.memory(0)) == doctest::Approx(expect).epsilon(1e-15));

  // beta -> 0 scales the energy away.
  const NetworkConfig tiny = bipolar_config(0.25, 1e-12);
  CHECK(std::abs(energy(tiny, mem, mem.memory(0))) < 1e-9);
}

TEST_CASE("energy decreases on every changing step") {
  std::mt19937_64 rng(307);
  for (const auto& [cfg_base, dim] : family_configs()) {
    CAPTURE(cfg_base.algebra.name());
    for (int rep = 0; rep < 100; ++rep) {
      NetworkConfig cfg = cfg_base;
      cfg.update = (rep % 2 == 0) ? UpdateMode::synchronous : UpdateMode::asynchronous;
      cfg.max_sweeps = 200;
      std::mt19937_64 gen(rng());
      const MemorySet mem = random_memories(cfg, 12, 6, gen);
      const HVector x0 = random_state_vector(cfg, 12, gen);
      const RunResult res = run(cfg, mem, x0);
      CHECK(res.status == RunStatus::converged);
      for (std::size_t k = 1; k < res.energy_trace.size(); ++k) {
        CHECK(res.energy_trace[k].second - res.energy_trace[k - 1].second < 1e-10);
      }
    }
  }
}

TEST_CASE("converged runs are synchronous fixed points") {
  std::mt19937_64 rng(401);
  for (const auto& [cfg_base, dim] : family_configs()) {
    NetworkConfig cfg = cfg_base;
    cfg.update = UpdateMode::asynchronous;
    std::mt19937_64 gen(rng());
    const MemorySet mem = random_memories(cfg, 10, 5, gen);
    const RunResult res = run(cfg, mem, random_state_vector(cfg, 10, gen));
    REQUIRE(res.status == RunStatus::converged);
    CHECK(step_sync(cfg, mem, res.final_state).second == 0);
  }
}

TEST_CASE("stored memories are fixed points at experiment scale") {
  NetworkConfig cfg = bipolar_config(10.0 / 100.0, std::exp(-10.0));
  std::mt19937_64 rng(777);
  const MemorySet mem = random_memories(cfg, 100, 160, rng);
  for (const std::size_t xi : {std::size_t{0}, std::size_t{59}, std::size_t{159}}) {
    const RunResult res = run(cfg, mem, mem.memory(xi));
    CHECK(res.status == RunStatus::converged);
    CHECK(res.sweeps_used == 0);
    CHECK(res.final_state == mem.memory(xi));
  }
}

TEST_CASE("hyperbolic example cycles between the second and third memories") {
  const auto memories = phase_example_memories();
  const MemorySet mem = MemorySet::from_vectors(Algebra::hyperbolic(), memories);
  for (const double alpha : {0.5, 1.0}) {
    CAPTURE(alpha);
    NetworkConfig cfg = hyperbolic_csgn_config(alpha);
    cfg.update = UpdateMode::synchronous;
    const RunResult sync = run(cfg, mem, memories[1]);
    REQUIRE(sync.status == RunStatus::cycled);
    CHECK(sync.cycle_period == 2);
    REQUIRE(sync.cycle_states.size() == 2);
    const bool has_u2 = sync.cycle_states[0] == memories[1] || sync.cycle_states[1] == memories[1];
    const bool has_u3 = sync.cycle_states[0] == memories[2] || sync.cycle_states[1] == memories[2];
    CHECK(has_u2);
    CHECK(has_u3);

    cfg.update = UpdateMode::asynchronous;
    const RunResult async_res = run(cfg, mem, memories[1]);
    REQUIRE(async_res.status == RunStatus::cycled);
    bool async_u2 = false, async_u3 = false;
    for (const HVector& s : async_res.cycle_states) {
      async_u2 = async_u2 || s == memories[1];
      async_u3 = async_u3 || s == memories[2];
    }
    CHECK(async_u2);
    CHECK(async_u3);
  }
}

TEST_CASE("incremental weight cache tracks arbitrary component rewrites") {
  NetworkConfig cfg = bipolar_config(10.0 / 100.0, std::exp(-10.0));
  std::mt19937_64 rng(555);
  const MemorySet mem = random_memories(cfg, 100, 160, rng);
  HVector x = random_state_vector(cfg, 100, rng);

  std::vector<double> cache = init_weights(cfg, mem, x);
  const StateAlphabet alph = alphabet(cfg.activation, 1);
  std::uniform_int_distribution<std::size_t> pick(0, 99);
  for (int step = 0; step < 100; ++step) {
    const std::size_t i = pick(rng);
    const HNumber before = x.component(i);
    const HNumber after = random_state(alph, rng);
    update_weight_cache(cfg, mem, i, before, after, cache);
    x.set_component(i, after);
  }
  const std::vector<double> full = init_weights(cfg, mem, x);
  for (std::size_t xi = 0; xi < full.size(); ++xi)
    CHECK(std::abs(cache[xi] - full[xi]) <= 1e-9 * std::abs(full[xi]));

  // No state change leaves the cache untouched.
  std::vector<double> frozen = cache;
  update_weight_cache(cfg, mem, 0, x.component(0), x.component(0), frozen);
  for (std::size_t xi = 0; xi < frozen.size(); ++xi)
    CHECK(frozen[xi] == doctest::Approx(cache[xi]).epsilon(1e-12));
}

TEST_CASE("async trajectory keeps the cache consistent") {
  NetworkConfig cfg = bipolar_config(10.0 / 100.0, std::exp(-10.0));
  cfg.update = UpdateMode::asynchronous;
  std::mt19937_64 rng(901);
  const MemorySet mem = random_memories(cfg, 60, 40, rng);
  HVector x = random_state_vector(cfg, 60, rng);
  std::vector<double> cache = init_weights(cfg, mem, x);
  for (int sweep = 0; sweep < 4; ++sweep)
    for (std::size_t i = 0; i < 60; ++i) step_async(cfg, mem, x, i, &cache);
  const std::vector<double> full = init_weights(cfg, mem, x);
  for (std::size_t xi = 0; xi < full.size(); ++xi)
    CHECK(std::abs(cache[xi] - full[xi]) <= 1e-9 * std::abs(full[xi]));
}

TEST_CASE("normalization never changes the trajectory") {
  std::mt19937_64 rng(111);
  for (const UpdateMode mode : {UpdateMode::synchronous, UpdateMode::asynchronous}) {
    NetworkConfig plain = bipolar_config(0.1, std::exp(-10.0));
    plain.update = mode;
    NetworkConfig normalized = plain;
    normalized.excitation.normalize = true;
    std::mt19937_64 gen(rng());
    const MemorySet mem = random_memories(plain, 40, 30, gen);
    const HVector x0 = random_state_vector(plain, 40, gen);
    const RunResult a = run(plain, mem, x0);
    const RunResult b = run(normalized, mem, x0);
    CHECK(a.final_state == b.final_state);
    CHECK(a.sweeps_used == b.sweeps_used);
    CHECK(a.status == b.status);
  }
}

TEST_CASE("synchronous runs are deterministic") {
  NetworkConfig cfg = bipolar_config(0.1, std::exp(-10.0));
  std::mt19937_64 rng(66);
  const MemorySet mem = random_memories(cfg, 50, 30, rng);
  const HVector x0 = random_state_vector(cfg, 50, rng);
  const RunResult a = run(cfg, mem, x0);
  const RunResult b = run(cfg, mem, x0);
  CHECK(a.final_state == b.final_state);
  CHECK(a.energy_trace == b.energy_trace);
  CHECK(a.settle_time == b.settle_time);
}

TEST_CASE("random async order converges too") {
  NetworkConfig cfg = bipolar_config(0.1, std::exp(-10.0));
  cfg.update = UpdateMode::asynchronous;
  cfg.async_order = AsyncOrder::random_order;
  cfg.seed = 9;
  std::mt19937_64 rng(13);
  const MemorySet mem = random_memories(cfg, 30, 20, rng);
  const RunResult res = run(cfg, mem, random_state_vector(cfg, 30, rng));
  CHECK(res.status == RunStatus::converged);
}

TEST_CASE("potential excitation recalls an exactly matching memory") {
  NetworkConfig cfg = bipolar_config(1.0, 1.0);
  cfg.excitation = {ExcitationKind::potential, 1, 1, 2, 2.0, false};
  const MemorySet mem = bipolar_example();
  const auto [next, changed] = step_sync(cfg, mem, mem.memory(1));
  CHECK(changed == 0);
  CHECK(next == mem.memory(1));
  CHECK(energy(cfg, mem, mem.memory(1)) == -std::numeric_limits<double>::infinity());

  const RunResult res = run(cfg, mem, mem.memory(1));
  CHECK(res.status == RunStatus::converged);

  cfg.update = UpdateMode::asynchronous;
  const RunResult async_res = run(cfg, mem, mem.memory(2));
  CHECK(async_res.status == RunStatus::converged);
  CHECK(async_res.final_state == mem.memory(2));
}

TEST_CASE("sweep budget exhaustion is reported") {
  // The hyperbolic 2-cycle never settles; with cycle detection disabled via
  // random order it runs out of sweeps instead.
  NetworkConfig cfg = hyperbolic_csgn_config(0.5);
  cfg.update = UpdateMode::asynchronous;
  cfg.async_order = AsyncOrder::random_order;
  cfg.max_sweeps = 12;
  const MemorySet mem = MemorySet::from_vectors(Algebra::hyperbolic(), phase_example_memories());
  const RunResult res = run(cfg, mem, mem.memory(1));
  CHECK(res.status == RunStatus::max_sweeps_reached);
  CHECK(res.sweeps_executed == 12);
}

TEST_CASE("out-of-domain potentials freeze the neuron") {
  // A state orthogonal to the only stored pattern yields zero weights under
  // the identity excitation, hence a zero potential: the neuron keeps its
  // previous value and the state is stationary.
  NetworkConfig cfg = bipolar_config(1.0, 1.0);
  cfg.excitation = {ExcitationKind::identity, 1, 1, 2, 1, false};
  const MemorySet mem =
      MemorySet::from_vectors(Algebra::reals(), {from_coeffs(1, {1, 1})});
  const HVector x = from_coeffs(1, {1, -1});
  const auto [next, changed] = step_sync(cfg, mem, x);
  CHECK(changed == 0);
  CHECK(next == x);
  const RunResult res = run(cfg, mem, x);
  CHECK(res.status == RunStatus::converged);
  CHECK(res.final_state == x);
}

TEST_CASE("shape validation errors") {
  const MemorySet mem = bipolar_example();
  const NetworkConfig cfg = bipolar_config(0.25, 1.0);
  CHECK_THROWS_AS(correlations(cfg, mem, HVector(3, 1)), std::invalid_argument);
  CHECK_THROWS_AS(potentials(mem, std::vector<double>{1.0}), std::invalid_argument);
  HVector bad(4, 1);
  bad.flat = {0.5, 1, 1, 1};  // 0.5 is not a codomain element
  CHECK_THROWS_AS(run(cfg, mem, bad), std::invalid_argument);
  CHECK_THROWS_AS(MemorySet::from_vectors(Algebra::reals(), {}), std::invalid_argument);
  CHECK_THROWS_AS(validate_memories(cfg, MemorySet::from_vectors(Algebra::reals(),
                                                                 {from_coeffs(1, {0.5, 1.0})})),
                  std::invalid_argument);
}

TEST_CASE("asynchronous settle times usually beat synchronous ones") {
  NetworkConfig cfg = bipolar_config(10.0 / 100.0, std::exp(-10.0));
  std::size_t async_earlier = 0, comparable = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    const MemorySet mem = random_memories(cfg, 100, 160, rng);
    const HVector x0 = random_state_vector(cfg, 100, rng);
    NetworkConfig sync_cfg = cfg;
    sync_cfg.update = UpdateMode::synchronous;
    NetworkConfig async_cfg = cfg;
    async_cfg.update = UpdateMode::asynchronous;
    const RunResult s = run(sync_cfg, mem, x0);
    const RunResult a = run(async_cfg, mem, x0);
    if (s.status == RunStatus::converged && a.status == RunStatus::converged) {
      ++comparable;
      if (a.settle_time < s.settle_time) ++async_earlier;
    }
  }
  REQUIRE(comparable >= 15);
  CHECK(async_earlier * 2 > comparable);  // majority
}
