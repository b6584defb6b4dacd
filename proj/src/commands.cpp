#include "hyperam/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "hyperam/dynamics.hpp"

namespace hyperam {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_meta(const fs::path& path, const ExperimentConfig& cfg,
                const std::vector<std::string>& extra) {
  std::ostringstream out;
  out << "resolved config:\n";
  for (const std::string& line : cfg.echo()) out << "  " << line << "\n";
  if (!extra.empty()) {
    out << "results:\n";
    for (const std::string& line : extra) out << "  " << line << "\n";
  }
  write_file(path, out.str());
}

std::string format_number(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string alpha_tag(double alpha) {
  std::ostringstream s;
  s << "alpha" << alpha;
  return s.str();
}

std::string component_text(const HNumber& v) {
  std::ostringstream s;
  s << "(";
  for (std::size_t j = 0; j < v.dim(); ++j) s << (j ? ", " : "") << v[j];
  s << ")";
  return s.str();
}

// Attractor structure used to compare the two parameter readings of one
// example: fixed points, spurious states, and cycle membership sets.
struct AttractorSummary {
  std::set<std::uint32_t> fixed, spurious;
  std::set<std::set<std::uint32_t>> cycles;

  bool operator==(const AttractorSummary&) const = default;
};

AttractorSummary summarize(const Classification& cls) {
  AttractorSummary s;
  s.fixed.insert(cls.fixed_points.begin(), cls.fixed_points.end());
  s.spurious.insert(cls.spurious.begin(), cls.spurious.end());
  for (const auto& cycle : cls.cycles) s.cycles.insert({cycle.begin(), cycle.end()});
  return s;
}

}  // namespace

int cmd_dynamics(const ExperimentConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  if (cfg.memories.empty()) {
    log << "dynamics: no memories configured (use a preset or a [memories] section)\n";
    return kExitUsage;
  }
  const MemorySet mem = MemorySet::from_vectors(cfg.net.algebra, cfg.memories);
  validate_memories(cfg.net, mem);
  const std::string stem = cfg.preset.empty() ? "dynamics" : cfg.preset;

  std::vector<AttractorSummary> summaries;
  std::vector<std::string> meta;
  for (const double alpha : cfg.alpha_readings) {
    ExperimentConfig local = cfg;
    local.net.excitation.alpha = alpha;
    const StateGraph graph = build_graph(local.net, mem);
    const Classification cls = classify(graph);
    summaries.push_back(summarize(cls));

    std::vector<std::string> echo = local.echo();
    const std::string tag = stem + "_" + alpha_tag(alpha);
    write_file(out_dir / (tag + "_sync.dot"), export_dot(graph, false, echo));
    write_file(out_dir / (tag + "_async.dot"), export_dot(graph, true, echo));
    write_file(out_dir / (tag + "_attractors.csv"), attractor_csv(graph, cls));

    std::ostringstream line;
    line << tag << ": " << graph.state_count << " states, " << cls.fixed_points.size()
         << " fixed points, " << cls.spurious.size() << " spurious, " << cls.cycles.size()
         << " cycles";
    meta.push_back(line.str());
    log << line.str() << "\n";
  }

  bool agree = true;
  for (std::size_t i = 1; i < summaries.size(); ++i)
    if (!(summaries[i] == summaries[0])) agree = false;
  if (!agree) {
    meta.push_back("parameter readings DISAGREE on the attractor structure");
    log << "dynamics: parameter readings disagree on the attractor structure\n";
  }
  write_meta(out_dir / (stem + ".meta.txt"), cfg, meta);
  return agree ? kExitOk : kExitAssertion;
}

int cmd_energy_trace(const ExperimentConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  const std::string stem = cfg.preset.empty() ? "energy" : cfg.preset;
  std::vector<std::string> meta;
  std::ostringstream summary;
  summary << "run,mode,status,sweeps_used,sweeps_executed,settle_time,final_energy\n";

  std::size_t converged = 0, total = 0, async_earlier = 0, paired = 0;
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    std::mt19937_64 rng(cfg.seed + r);
    const MemorySet mem = random_memories(cfg.net, cfg.n, cfg.p, rng);
    const HVector x0 = random_state_vector(cfg.net, cfg.n, rng);

    std::ostringstream trace;
    trace << "time,energy,mode\n";
    double sync_settle = -1.0, async_settle = -1.0;
    for (const UpdateMode mode : {UpdateMode::synchronous, UpdateMode::asynchronous}) {
      if (mode == UpdateMode::synchronous && !cfg.run_sync) continue;
      if (mode == UpdateMode::asynchronous && !cfg.run_async) continue;
      ExperimentConfig local = cfg;
      local.net.update = mode;
      const RunResult res = run(local.net, mem, x0);
      for (const auto& [t, e] : res.energy_trace)
        trace << t << "," << format_number(e) << "," << to_string(mode) << "\n";
      summary << (r + 1) << "," << to_string(mode) << "," << to_string(res.status) << ","
              << res.sweeps_used << "," << res.sweeps_executed << "," << res.settle_time << ","
              << format_number(res.energy_trace.back().second) << "\n";
      ++total;
      if (res.status == RunStatus::converged) ++converged;
      (mode == UpdateMode::synchronous ? sync_settle : async_settle) = res.settle_time;
    }
    write_file(out_dir / (stem + "_trace_run" + std::to_string(r + 1) + ".csv"), trace.str());
    if (sync_settle >= 0.0 && async_settle >= 0.0) {
      ++paired;
      if (async_settle < sync_settle) ++async_earlier;
    }
  }
  write_file(out_dir / (stem + "_summary.csv"), summary.str());

  std::ostringstream line;
  line << converged << "/" << total << " runs converged";
  if (paired > 0) line << "; asynchronous settled earlier in " << async_earlier << "/" << paired;
  meta.push_back(line.str());
  log << line.str() << "\n";
  write_meta(out_dir / (stem + ".meta.txt"), cfg, meta);
  return kExitOk;
}

int cmd_image_recall(const ExperimentConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  std::vector<GrayImage> images;
  if (!cfg.image_dir.empty()) {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(cfg.image_dir))
      if (entry.path().extension() == ".pgm") paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) images.push_back(read_pgm(p));
    if (images.empty()) {
      log << "image-recall: no .pgm files under " << cfg.image_dir << "\n";
      return kExitUsage;
    }
  } else {
    images = synthetic_images(cfg.image_count, cfg.image_width, cfg.image_height, cfg.seed);
  }

  std::vector<UpdateMode> modes;
  if (cfg.run_sync) modes.push_back(UpdateMode::synchronous);
  if (cfg.run_async) modes.push_back(UpdateMode::asynchronous);

  std::ostringstream csv;
  csv << "codec,mode,noise_stdev,trials,successes,rate\n";
  std::vector<std::string> meta;
  for (const Codec codec : cfg.codecs) {
    const auto rows = recall_experiment(codec, images, modes, cfg.noise_levels, cfg.trials,
                                        cfg.a_param, cfg.seed, cfg.net.max_sweeps);
    for (const RecallRow& row : rows) {
      csv << to_string(row.codec) << "," << to_string(row.mode) << "," << row.noise_stdev << ","
          << row.trials << "," << row.successes << "," << row.rate() << "\n";
      std::ostringstream line;
      line << to_string(row.codec) << " " << to_string(row.mode) << " sigma=" << row.noise_stdev
           << ": " << row.successes << "/" << row.trials;
      meta.push_back(line.str());
      log << line.str() << "\n";
    }
  }
  const std::string stem = cfg.preset.empty() ? "recall" : cfg.preset;
  write_file(out_dir / (stem + "_success.csv"), csv.str());
  write_meta(out_dir / (stem + ".meta.txt"), cfg, meta);
  return kExitOk;
}

namespace {

struct CheckResult {
  bool passed = false;
  std::string detail;
};

struct VerifyCheck {
  std::string id;
  bool expect_pass;
  std::function<CheckResult(std::uint64_t seed)> fn;
};

CheckResult involution_check(const Algebra& alg, Involution inv, std::uint64_t seed) {
  const InvolutionReport rep = check_reverse_involution(alg, inv, 200, seed);
  std::ostringstream detail;
  detail << "violations: involution " << rep.max_involution << ", antihom " << rep.max_antihom
         << ", linearity " << rep.max_linearity;
  if (!rep.passed() && rep.worst_unit_mu != 0)
    detail << " (units i" << rep.worst_unit_mu << ", i" << rep.worst_unit_nu << ")";
  return {rep.passed(), detail.str()};
}

CheckResult reahn_check(const Algebra& alg, Involution inv, std::uint64_t seed) {
  const ReAhnReport rep = check_re_ahn(alg, inv, 1000, seed);
  std::ostringstream detail;
  detail << "max |Re((pq)r - p(qr))| = " << rep.max_violation
         << ", min B(p,p) = " << rep.min_self_bilinear;
  return {rep.max_violation <= 1e-10, detail.str()};
}

CheckResult bfun_check(const Activation& act, const Algebra& alg, Involution inv,
                       std::uint64_t seed) {
  const BFunctionReport rep = check_b_function(act, alg, inv, 1000, seed);
  std::ostringstream detail;
  if (rep.passed) {
    detail << "worst margin " << rep.worst_margin << " over " << rep.samples << " samples";
  } else {
    detail << "counterexample: q=" << component_text(rep.counterexample->q)
           << " phi(q)=" << component_text(rep.counterexample->phi_q)
           << " s=" << component_text(rep.counterexample->s)
           << " margin=" << rep.counterexample->margin;
  }
  return {rep.passed, detail.str()};
}

std::vector<VerifyCheck> verify_suite() {
  std::vector<VerifyCheck> checks;
  const auto involutions = [](const char* alg_name, const Algebra& alg, Involution inv,
                              bool expect) {
    return VerifyCheck{std::string("involution.") + alg_name + "." + to_string(inv), expect,
                       [alg, inv](std::uint64_t seed) { return involution_check(alg, inv, seed); }};
  };
  checks.push_back(involutions("complex", Algebra::complex_numbers(), Involution::natural, true));
  checks.push_back(involutions("hyperbolic", Algebra::hyperbolic(), Involution::natural, true));
  checks.push_back(involutions("quaternion", Algebra::quaternions(), Involution::natural, true));
  checks.push_back(involutions("octonion", Algebra::octonions(), Involution::natural, true));
  checks.push_back(involutions("complex", Algebra::complex_numbers(), Involution::trivial, true));
  checks.push_back(involutions("hyperbolic", Algebra::hyperbolic(), Involution::trivial, true));
  checks.push_back(involutions("tessarine", Algebra::tessarines(), Involution::trivial, true));
  // The trivial involution is no anti-homomorphism once multiplication stops
  // commuting, and negating all three tessarine units breaks ij = k.
  checks.push_back(involutions("quaternion", Algebra::quaternions(), Involution::trivial, false));
  checks.push_back(involutions("tessarine", Algebra::tessarines(), Involution::natural, false));

  const auto reahn = [](const char* alg_name, const Algebra& alg, Involution inv) {
    return VerifyCheck{std::string("reahn.") + alg_name + "." + to_string(inv), true,
                       [alg, inv](std::uint64_t seed) { return reahn_check(alg, inv, seed); }};
  };
  checks.push_back(reahn("complex", Algebra::complex_numbers(), Involution::natural));
  checks.push_back(reahn("hyperbolic", Algebra::hyperbolic(), Involution::natural));
  checks.push_back(reahn("quaternion", Algebra::quaternions(), Involution::natural));
  checks.push_back(reahn("tessarine", Algebra::tessarines(), Involution::natural));
  checks.push_back(reahn("octonion", Algebra::octonions(), Involution::natural));

  const auto bfun = [](const std::string& id, Activation act, const Algebra& alg, Involution inv,
                       bool expect) {
    return VerifyCheck{"bfun." + id, expect, [act, alg, inv](std::uint64_t seed) {
                         return bfun_check(act, alg, inv, seed);
                       }};
  };
  checks.push_back(bfun("bipolar_sign.reals.trivial", {ActivationKind::bipolar_sign, 2},
                        Algebra::reals(), Involution::trivial, true));
  checks.push_back(bfun("csgn.complex.natural", {ActivationKind::csgn, 8},
                        Algebra::complex_numbers(), Involution::natural, true));
  checks.push_back(bfun("csgn_conjugated.hyperbolic.natural", {ActivationKind::csgn_conjugated, 4},
                        Algebra::hyperbolic(), Involution::natural, true));
  checks.push_back(bfun("twin_multistate.quaternion.natural", {ActivationKind::twin_multistate, 4},
                        Algebra::quaternions(), Involution::natural, true));
  checks.push_back(bfun("continuous_sigma.octonion.natural", {ActivationKind::continuous_sigma, 2},
                        Algebra::octonions(), Involution::natural, true));
  checks.push_back(bfun("split_sign.octonion.natural", {ActivationKind::split_sign, 2},
                        Algebra::octonions(), Involution::natural, true));
  checks.push_back(bfun("csgn.hyperbolic.natural", {ActivationKind::csgn, 4},
                        Algebra::hyperbolic(), Involution::natural, false));
  return checks;
}

}  // namespace

int cmd_verify(const ExperimentConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  std::vector<VerifyCheck> checks = verify_suite();
  if (!cfg.single_check.empty()) {
    std::vector<VerifyCheck> filtered;
    for (const VerifyCheck& c : checks)
      if (c.id.find(cfg.single_check) != std::string::npos) filtered.push_back(c);
    if (filtered.empty()) {
      log << "verify: unknown check '" << cfg.single_check << "'\n";
      log << "available checks:\n";
      for (const VerifyCheck& c : checks) log << "  " << c.id << "\n";
      return kExitUsage;
    }
    checks = std::move(filtered);
  }

  std::ostringstream report;
  bool all_ok = true;
  for (const VerifyCheck& c : checks) {
    const CheckResult res = c.fn(cfg.seed);
    const bool ok = res.passed == c.expect_pass;
    all_ok = all_ok && ok;
    const char* label = ok ? (c.expect_pass ? "PASS " : "XFAIL") : (res.passed ? "XPASS" : "FAIL ");
    std::ostringstream line;
    line << label << " " << std::left << std::setw(44) << c.id << " " << res.detail;
    report << line.str() << "\n";
    log << line.str() << "\n";
  }
  report << (all_ok ? "verify: all expectations met\n" : "verify: expectation failures\n");
  log << (all_ok ? "verify: all expectations met\n" : "verify: expectation failures\n");
  write_file(out_dir / "verify_report.txt", report.str());
  write_meta(out_dir / "verify.meta.txt", cfg, {all_ok ? "all expectations met" : "failures"});
  return all_ok ? kExitOk : kExitAssertion;
}

int run_command(const ExperimentConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  fs::create_directories(out_dir);
  switch (cfg.kind) {
    case ExperimentKind::dynamics: return cmd_dynamics(cfg, out_dir, log);
    case ExperimentKind::energy_trace: return cmd_energy_trace(cfg, out_dir, log);
    case ExperimentKind::image_recall: return cmd_image_recall(cfg, out_dir, log);
    case ExperimentKind::verify: return cmd_verify(cfg, out_dir, log);
  }
  return kExitUsage;
}

}  // namespace hyperam
