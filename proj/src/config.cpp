#include "hyperam/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hyperam {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  for (const char ch : s) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item += ch;
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

struct Entry {
  std::string section, key, value;
  int line;
};

double parse_double(const Entry& e) {
  try {
    std::size_t used = 0;
    const double v = std::stod(e.value, &used);
    if (used != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(e.line, "expected a number for '" + e.key + "', got '" + e.value + "'");
  }
}

std::uint64_t parse_u64(const Entry& e) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(e.value, &used);
    if (used != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(e.line, "expected an unsigned integer for '" + e.key + "'");
  }
}

bool parse_bool(const Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ConfigError(e.line, "expected true/false for '" + e.key + "'");
}

std::vector<double> parse_double_list(const Entry& e) {
  std::vector<double> out;
  for (const std::string& item : split_list(e.value)) {
    Entry sub{e.section, e.key, item, e.line};
    out.push_back(parse_double(sub));
  }
  if (out.empty()) throw ConfigError(e.line, "empty list for '" + e.key + "'");
  return out;
}

}  // namespace

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::dynamics: return "dynamics";
    case ExperimentKind::energy_trace: return "energy_trace";
    case ExperimentKind::image_recall: return "image_recall";
    case ExperimentKind::verify: return "verify";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  if (s == "dynamics") return ExperimentKind::dynamics;
  if (s == "energy_trace" || s == "energy-trace") return ExperimentKind::energy_trace;
  if (s == "image_recall" || s == "image-recall") return ExperimentKind::image_recall;
  if (s == "verify") return ExperimentKind::verify;
  throw std::invalid_argument("unknown experiment kind: " + s);
}

std::vector<std::string> ExperimentConfig::echo() const {
  std::vector<std::string> out;
  auto add = [&out](const std::string& k, const std::string& v) { out.push_back(k + " = " + v); };
  auto num = [](double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  };
  add("kind", to_string(kind));
  if (!preset.empty()) add("preset", preset);
  add("seed", std::to_string(seed));
  add("algebra", net.algebra.name());
  add("involution", to_string(net.involution));
  add("activation", to_string(net.activation.kind));
  add("K", std::to_string(net.activation.resolution));
  add("excitation", to_string(net.excitation.kind));
  add("alpha", num(net.excitation.alpha));
  add("beta", num(net.excitation.beta));
  if (net.excitation.kind == ExcitationKind::high_order) add("order", num(net.excitation.order));
  if (net.excitation.kind == ExcitationKind::potential) add("L", num(net.excitation.depth));
  add("normalize", net.excitation.normalize ? "true" : "false");
  add("update", run_sync && run_async ? "both" : (run_sync ? "synchronous" : "asynchronous"));
  add("async_order", to_string(net.async_order));
  add("max_sweeps", std::to_string(net.max_sweeps));
  switch (kind) {
    case ExperimentKind::dynamics:
      add("memories", std::to_string(memories.size()));
      if (!alpha_readings.empty()) {
        std::string readings;
        for (const double a : alpha_readings) readings += (readings.empty() ? "" : ", ") + num(a);
        add("alpha_readings", readings);
      }
      break;
    case ExperimentKind::energy_trace:
      add("N", std::to_string(n));
      add("P", std::to_string(p));
      add("runs", std::to_string(runs));
      break;
    case ExperimentKind::image_recall: {
      std::string cs;
      for (const Codec c : codecs) cs += (cs.empty() ? "" : ", ") + std::string(to_string(c));
      add("codecs", cs);
      std::string ns;
      for (const double v : noise_levels) ns += (ns.empty() ? "" : ", ") + num(v);
      add("noise", ns);
      add("trials", std::to_string(trials));
      add("a", num(a_param));
      add("images", image_dir.empty() ? "synthetic:" + std::to_string(image_count) : image_dir);
      add("size", std::to_string(image_width) + "x" + std::to_string(image_height));
      break;
    }
    case ExperimentKind::verify:
      if (!single_check.empty()) add("check", single_check);
      break;
  }
  return out;
}

ExperimentConfig parse_config_text(const std::string& text) {
  std::vector<Entry> entries;
  {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::string section;
    while (std::getline(in, raw)) {
      ++line_no;
      const std::string line = trim(raw);
      if (line.empty() || line[0] == '#') continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError(line_no, "malformed section header: " + line);
        section = trim(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(line_no, "expected 'key = value', got: " + line);
      if (section.empty())
        throw ConfigError(line_no, "key outside of any [section]");
      entries.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no});
    }
  }

  ExperimentConfig cfg;
  bool have_kind = false;
  // Apply the preset first so explicit keys can override it.
  for (const Entry& e : entries) {
    if (e.section == "experiment" && e.key == "preset") {
      try {
        cfg = preset(e.value);
        have_kind = true;
      } catch (const std::invalid_argument& ex) {
        throw ConfigError(e.line, ex.what());
      }
    }
  }

  // Custom algebra assembled from the [algebra] section, if given.
  std::string alg_name, alg_table;
  std::size_t alg_dim = 0;
  int alg_line = 0;

  bool explicit_alpha = false, explicit_readings = false;
  std::vector<Entry> memory_entries;

  for (const Entry& e : entries) {
    try {
      if (e.section == "experiment") {
        if (e.key == "kind") {
          cfg.kind = experiment_kind_from_string(e.value);
          have_kind = true;
        } else if (e.key == "preset") {
          // applied above
        } else if (e.key == "seed") {
          cfg.seed = parse_u64(e);
        } else if (e.key == "out") {
          cfg.out_dir = e.value;
        } else {
          throw ConfigError(e.line, "unknown key '" + e.key + "' in [experiment]");
        }
      } else if (e.section == "algebra") {
        if (e.key == "name") {
          alg_name = e.value;
          alg_line = e.line;
        } else if (e.key == "dim") {
          alg_dim = parse_u64(e);
        } else if (e.key == "table") {
          alg_table = e.value;
        } else if (e.key == "involution") {
          cfg.net.involution = involution_from_string(e.value);
        } else {
          throw ConfigError(e.line, "unknown key '" + e.key + "' in [algebra]");
        }
      } else if (e.section == "activation") {
        if (e.key == "kind")
          cfg.net.activation.kind = activation_kind_from_string(e.value);
        else if (e.key == "K")
          cfg.net.activation.resolution = static_cast<int>(parse_u64(e));
        else
          throw ConfigError(e.line, "unknown key '" + e.key + "' in [activation]");
      } else if (e.section == "excitation") {
        if (e.key == "kind")
          cfg.net.excitation.kind = excitation_kind_from_string(e.value);
        else if (e.key == "alpha") {
          cfg.net.excitation.alpha = parse_double(e);
          explicit_alpha = true;
        } else if (e.key == "beta")
          cfg.net.excitation.beta = parse_double(e);
        else if (e.key == "order")
          cfg.net.excitation.order = parse_double(e);
        else if (e.key == "L")
          cfg.net.excitation.depth = parse_double(e);
        else if (e.key == "normalize")
          cfg.net.excitation.normalize = parse_bool(e);
        else
          throw ConfigError(e.line, "unknown key '" + e.key + "' in [excitation]");
      } else if (e.section == "network") {
        if (e.key == "N")
          cfg.n = parse_u64(e);
        else if (e.key == "P")
          cfg.p = parse_u64(e);
        else if (e.key == "update") {
          if (e.value == "both") {
            cfg.run_sync = cfg.run_async = true;
          } else if (e.value == "synchronous") {
            cfg.run_sync = true;
            cfg.run_async = false;
          } else if (e.value == "asynchronous") {
            cfg.run_sync = false;
            cfg.run_async = true;
          } else {
            throw ConfigError(e.line, "update must be synchronous, asynchronous, or both");
          }
        } else if (e.key == "async_order") {
          if (e.value == "cyclic")
            cfg.net.async_order = AsyncOrder::cyclic;
          else if (e.value == "random")
            cfg.net.async_order = AsyncOrder::random_order;
          else
            throw ConfigError(e.line, "async_order must be cyclic or random");
        } else if (e.key == "max_sweeps") {
          cfg.net.max_sweeps = parse_u64(e);
          if (cfg.net.max_sweeps == 0) throw ConfigError(e.line, "max_sweeps must be positive");
        } else {
          throw ConfigError(e.line, "unknown key '" + e.key + "' in [network]");
        }
      } else if (e.section == "dynamics") {
        if (e.key == "alpha_readings") {
          cfg.alpha_readings = parse_double_list(e);
          explicit_readings = true;
        } else {
          throw ConfigError(e.line, "unknown key '" + e.key + "' in [dynamics]");
        }
      } else if (e.section == "energy_trace") {
        if (e.key == "runs")
          cfg.runs = parse_u64(e);
        else
          throw ConfigError(e.line, "unknown key '" + e.key + "' in [energy_trace]");
      } else if (e.section == "image_recall") {
        if (e.key == "codecs") {
          cfg.codecs.clear();
          for (const std::string& item : split_list(e.value))
            cfg.codecs.push_back(codec_from_string(item));
        } else if (e.key == "noise") {
          cfg.noise_levels = parse_double_list(e);
        } else if (e.key == "trials") {
          cfg.trials = static_cast<int>(parse_u64(e));
        } else if (e.key == "a") {
          cfg.a_param = parse_double(e);
        } else if (e.key == "count") {
          cfg.image_count = parse_u64(e);
        } else if (e.key == "width") {
          cfg.image_width = parse_u64(e);
        } else if (e.key == "height") {
          cfg.image_height = parse_u64(e);
        } else if (e.key == "images") {
          cfg.image_dir = e.value;
        } else {
          throw ConfigError(e.line, "unknown key '" + e.key + "' in [image_recall]");
        }
      } else if (e.section == "verify") {
        if (e.key == "check")
          cfg.single_check = e.value;
        else
          throw ConfigError(e.line, "unknown key '" + e.key + "' in [verify]");
      } else if (e.section == "memories") {
        memory_entries.push_back(e);
      } else {
        throw ConfigError(e.line, "unknown section [" + e.section + "]");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ConfigError(e.line, ex.what());
    }
  }

  if (!alg_name.empty()) {
    if (auto builtin = Algebra::builtin(alg_name)) {
      cfg.net.algebra = *builtin;
    } else if (alg_dim > 0) {
      std::ostringstream text;
      text << "name " << alg_name << "\ndim " << alg_dim << "\ntable\n" << alg_table << "\n";
      try {
        cfg.net.algebra = Algebra::from_text(text.str());
      } catch (const std::exception& ex) {
        throw ConfigError(alg_line, ex.what());
      }
    } else {
      throw ConfigError(alg_line, "unknown algebra '" + alg_name + "' (give dim and table for a custom one)");
    }
  }

  for (const Entry& e : memory_entries) {
    if (e.key == "count") continue;  // informative only
    const std::vector<double> coeffs = parse_double_list(e);
    const std::size_t dim = cfg.net.algebra.dim();
    if (coeffs.size() % dim != 0)
      throw ConfigError(e.line, "memory coefficient count not a multiple of the algebra dimension");
    HVector u(coeffs.size() / dim, dim);
    u.flat = coeffs;
    if (!cfg.memories.empty() && cfg.memories.front().size() != u.size())
      throw ConfigError(e.line, "memories must share one length");
    cfg.memories.push_back(std::move(u));
  }

  if (!have_kind) throw ConfigError(0, "missing required key 'kind' in [experiment]");
  // An explicit alpha replaces preset readings unless readings were given too.
  if (cfg.alpha_readings.empty() || (explicit_alpha && !explicit_readings))
    cfg.alpha_readings = {cfg.net.excitation.alpha};
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

}  // namespace hyperam
