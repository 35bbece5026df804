#include "floquet_hop/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "floquet_hop/fqme.hpp"

namespace floquet_hop {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::vector<std::string>, std::less<>> kSchema = {
    {"model", {"Ed_bar", "g", "omega", "Gamma", "kT", "kT_nuc0", "mass", "hbar"}},
    {"drive", {"A", "Omega"}},
    {"run",
     {"method", "t_final", "dt", "output_stride", "output_interval", "n_traj", "basis_N", "seed",
      "output"}},
};

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += sep;
    out += items[k];
  }
  return out;
}

std::string nearest(std::string_view word, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& c : candidates) {
    const std::size_t d = edit_distance(word, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::vector<std::string> section_names() {
  std::vector<std::string> names;
  for (const auto& [name, keys] : kSchema) names.push_back(name);
  return names;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, std::vector<std::string>& errors) : tree_(tree), errors_(errors) {}

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return *v;
  }

  std::optional<double> number(const std::string& section, const std::string& key, bool required) {
    const auto text = raw(section, key);
    if (!text) {
      if (required) errors_.push_back(fmt::format("missing required key {}.{}", section, key));
      return std::nullopt;
    }
    double v = 0.0;
    const std::string s = trim(*text);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      errors_.push_back(fmt::format("{}.{}: '{}' is not a finite number", section, key, *text));
      return std::nullopt;
    }
    return v;
  }

  template <typename Int>
  std::optional<Int> integer(const std::string& section, const std::string& key) {
    const auto text = raw(section, key);
    if (!text) return std::nullopt;
    Int v{};
    const std::string s = trim(*text);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      errors_.push_back(fmt::format("{}.{}: '{}' is not an integer", section, key, *text));
      return std::nullopt;
    }
    return v;
  }

  static std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
  }

 private:
  const pt::ptree& tree_;
  std::vector<std::string>& errors_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join(violations, "; ")), violations_(std::move(violations)) {}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::FQME: return "FQME";
    case Method::FaQME: return "FaQME";
    case Method::FSH: return "FSH";
    case Method::FaSH: return "FaSH";
    case Method::FaSHDensity: return "FaSH-density";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

int RunSettings::n_steps() const { return static_cast<int>(std::llround(t_final / dt)); }

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

SimConfig parse_config(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError({fmt::format("line {}: {}", e.line(), e.message())});
  }

  std::vector<std::string> errors;

  // Structure: known sections and keys only.
  for (const auto& [section, child] : tree) {
    const auto it = kSchema.find(section);
    if (child.empty() && !child.data().empty()) {
      errors.push_back(fmt::format("key '{}' outside of any section", section));
      continue;
    }
    if (it == kSchema.end()) {
      errors.push_back(fmt::format("unknown section [{}] (did you mean [{}]?)", section,
                                   nearest(section, section_names())));
      continue;
    }
    for (const auto& [key, value] : child) {
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
        errors.push_back(fmt::format("unknown key '{}.{}' (did you mean '{}'?)", section, key,
                                     nearest(key, it->second)));
      }
    }
  }

  Reader r(tree, errors);
  SimConfig c;

  const auto ed_bar = r.number("model", "Ed_bar", true);
  const auto g = r.number("model", "g", true);
  const auto omega = r.number("model", "omega", true);
  const auto gamma = r.number("model", "Gamma", true);
  const auto kT = r.number("model", "kT", true);
  const auto kT_nuc0 = r.number("model", "kT_nuc0", true);
  const auto mass = r.number("model", "mass", false);
  const auto hbar = r.number("model", "hbar", false);
  if (ed_bar) c.model.Ed_bar = *ed_bar;
  if (g) c.model.g = *g;
  if (omega) {
    c.model.omega = *omega;
    if (*omega <= 0.0) errors.push_back("model.omega must be positive");
  }
  if (gamma) {
    c.model.Gamma = *gamma;
    if (*gamma <= 0.0) errors.push_back("model.Gamma must be positive");
  }
  if (kT) {
    c.model.kT_el = *kT;
    if (*kT <= 0.0) errors.push_back("model.kT must be positive");
  }
  if (kT_nuc0) {
    c.model.kT_nuc0 = *kT_nuc0;
    if (*kT_nuc0 <= 0.0) errors.push_back("model.kT_nuc0 must be positive");
  }
  if (mass && *mass != 1.0) errors.push_back("model.mass must be 1 (natural units)");
  if (hbar && *hbar != 1.0) errors.push_back("model.hbar must be 1 (natural units)");

  const auto amp = r.number("drive", "A", true);
  if (amp) {
    c.drive.A = *amp;
    if (*amp < 0.0) errors.push_back("drive.A must be non-negative");
  }
  const auto big_omega = r.number("drive", "Omega", amp && *amp > 0.0);
  if (big_omega) {
    c.drive.Omega = *big_omega;
    if (*big_omega <= 0.0 && amp && *amp > 0.0) errors.push_back("drive.Omega must be positive");
  }

  if (const auto m = r.raw("run", "method")) {
    const std::string name = Reader::trim(*m);
    c.method = parse_method(name);
    if (!c.method) {
      std::vector<std::string> names;
      for (Method k : kAllMethods) names.emplace_back(method_name(k));
      errors.push_back(fmt::format("run.method: unknown method '{}' (did you mean '{}'?)", name,
                                   nearest(name, names)));
    }
  }
  if (const auto v = r.number("run", "t_final", false)) c.t_final = *v;
  else c.t_final = 20.0 / c.model.Gamma;
  if (const auto v = r.number("run", "dt", false)) {
    c.dt = *v;
    if (*v <= 0.0) errors.push_back("dt must be positive");
  }
  if (const auto v = r.integer<int>("run", "output_stride")) {
    c.output_stride = *v;
    if (*v < 1) errors.push_back("output_stride must be >= 1");
  }
  if (const auto v = r.number("run", "output_interval", false)) {
    c.output_interval = *v;
    if (*v <= 0.0) errors.push_back("output_interval must be positive");
  }
  if (const auto v = r.integer<int>("run", "n_traj")) {
    c.n_traj = *v;
    if (*v < 1) errors.push_back("n_traj must be >= 1");
  }
  if (const auto v = r.integer<int>("run", "basis_N")) {
    c.basis_N = *v;
    if (*v < 1) errors.push_back("basis_N must be >= 1");
  }
  if (const auto v = r.integer<std::uint64_t>("run", "seed")) c.seed = *v;
  if (const auto v = r.raw("run", "output")) c.output = Reader::trim(*v);

  if (c.dt && c.t_final <= *c.dt) errors.push_back("t_final must exceed dt");
  if (c.t_final <= 0.0) errors.push_back("t_final must be positive");

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({fmt::format("cannot open config file '{}'", path)});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_config(const SimConfig& c) {
  std::string out;
  out += "[model]\n";
  out += fmt::format("Ed_bar = {}\ng = {}\nomega = {}\nGamma = {}\nkT = {}\nkT_nuc0 = {}\n",
                     c.model.Ed_bar, c.model.g, c.model.omega, c.model.Gamma, c.model.kT_el,
                     c.model.kT_nuc0);
  out += "\n[drive]\n";
  out += fmt::format("A = {}\n", c.drive.A);
  if (c.drive.Omega > 0.0) out += fmt::format("Omega = {}\n", c.drive.Omega);
  out += "\n[run]\n";
  if (c.method) out += fmt::format("method = {}\n", method_name(*c.method));
  out += fmt::format("t_final = {}\n", c.t_final);
  if (c.dt) out += fmt::format("dt = {}\n", *c.dt);
  if (c.output_stride) out += fmt::format("output_stride = {}\n", *c.output_stride);
  out += fmt::format("output_interval = {}\n", c.output_interval);
  out += fmt::format("n_traj = {}\n", c.n_traj);
  if (c.basis_N) out += fmt::format("basis_N = {}\n", *c.basis_N);
  out += fmt::format("seed = {}\n", c.seed);
  if (!c.output.empty()) out += fmt::format("output = {}\n", c.output);
  return out;
}

double max_time_step(Method method, const ModelParams& model, const DriveParams& drive,
                     int basis_N) {
  const double period = drive.driven() ? 2.0 * std::numbers::pi / drive.Omega : 0.0;
  if (is_matrix_method(method)) {
    double dt = 0.02 / model.omega;
    if (period > 0.0) dt = std::min(dt, 0.05 * period);
    if (basis_N > 1) {
      // RK4 stays stable on the imaginary axis up to |lambda dt| ~ 2.8.
      const double radius = model.omega * (basis_N - 1) + model.Gamma;
      dt = std::min(dt, 2.0 * model.hbar / radius);
    }
    return dt;
  }
  double dt = std::min(0.01, 0.05 / model.Gamma);  // keeps Gamma dt well below 0.1
  if (period > 0.0) dt = std::min(dt, 0.02 * period);
  return dt;
}

unsigned threads_from_environment() {
  const char* v = std::getenv("FLOQUET_HOP_THREADS");
  if (!v || !*v) return 0;
  unsigned n = 0;
  const std::string_view s(v);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError({fmt::format("FLOQUET_HOP_THREADS: '{}' is not a non-negative integer", s)});
  }
  return n;
}

RunSettings resolve(const SimConfig& c, Method method) {
  std::vector<std::string> errors;
  RunSettings s;
  s.method = method;
  s.model = c.model;
  s.drive = c.drive;
  s.t_final = c.t_final;
  s.n_traj = c.n_traj;
  s.seed = c.seed;
  s.threads = threads_from_environment();

  const bool physical = c.model.omega > 0.0 && c.model.kT_nuc0 > 0.0 && c.model.kT_el > 0.0 &&
                        c.model.Gamma > 0.0 && (!c.drive.driven() || c.drive.Omega > 0.0);
  if (c.basis_N) {
    s.basis_N = *c.basis_N;
  } else if (physical) {
    s.basis_N = std::max({40, thermal_basis_size(c.model.omega, c.model.kT_nuc0),
                          thermal_basis_size(c.model.omega, c.model.kT_el)});
  } else {
    s.basis_N = 40;
  }
  if (c.dt) {
    s.dt = *c.dt;
  } else if (physical) {
    const double dt_max = max_time_step(method, c.model, c.drive, s.basis_N);
    const double steps = std::ceil(c.output_interval / dt_max - 1e-9);
    s.dt = c.output_interval / steps;
  } else {
    s.dt = c.output_interval;
  }
  if (c.output_stride) {
    s.output_stride = *c.output_stride;
  } else {
    s.output_stride = std::max(1, static_cast<int>(std::lround(c.output_interval / s.dt)));
  }

  if (!(s.dt > 0.0)) errors.push_back("dt must be positive");
  if (!(s.t_final > s.dt)) errors.push_back("t_final must exceed dt");
  if (s.output_stride < 1) errors.push_back("output_stride must be >= 1");
  if (!is_matrix_method(method) && s.n_traj < 100) {
    errors.push_back("n_traj must be >= 100 for trajectory methods");
  }
  try {
    s.model.validate();
    s.drive.validate();
  } catch (const ModelError& e) {
    errors.emplace_back(e.what());
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return s;
}

}  // namespace floquet_hop
