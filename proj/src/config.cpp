#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "leakscope/harness.hpp"

namespace leakscope::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: key '" + key + "' has non-numeric value '" +
                             value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_real(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw std::runtime_error("config: key '" + key + "' must be an integer");
  }
  return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::runtime_error("config: key '" + key + "' must be true or false");
}

}  // namespace

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LEAKSCOPE_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 1;
}

void apply_override(ScenarioConfig& c, const std::string& key,
                    const std::string& value) {
  auto& p = c.params;
  if (key == "experiment") {
    c.experiment = value;
  } else if (key == "m") {
    p.m = parse_real(key, value);
  } else if (key == "n") {
    p.n = parse_int(key, value);
  } else if (key == "n_max") {
    p.n_max = parse_int(key, value);
    c.design.n_max = p.n_max;
  } else if (key == "n_min") {
    c.design.n_min = parse_int(key, value);
  } else if (key == "epsilon") {
    p.epsilon = parse_real(key, value);
  } else if (key == "phi") {
    p.phi = parse_real(key, value);
    c.design.phi = p.phi;
  } else if (key == "k") {
    p.k = parse_int(key, value);
  } else if (key == "K") {
    p.fading_b.k_factor = parse_real(key, value);
    p.fading_e.k_factor = p.fading_b.k_factor;
  } else if (key == "K_b") {
    p.fading_b.k_factor = parse_real(key, value);
  } else if (key == "K_e") {
    p.fading_e.k_factor = parse_real(key, value);
  } else if (key == "rho_db") {
    p.rho = std::pow(10.0, parse_real(key, value) / 10.0);
  } else if (key == "rho") {
    p.rho = parse_real(key, value);
  } else if (key == "alpha") {
    p.scheme.alpha = parse_real(key, value);
  } else if (key == "scheme") {
    if (value == "mrt") {
      p.scheme.alpha = 1.0;
    } else if (value != "an") {
      throw std::runtime_error("config: scheme must be 'an' or 'mrt'");
    }
  } else if (key == "fading") {
    if (value == "rayleigh") {
      p.fading_b.k_factor = 0.0;
      p.fading_e.k_factor = 0.0;
    } else if (value != "rician") {
      throw std::runtime_error("config: fading must be 'rayleigh' or 'rician'");
    }
  } else if (key == "beta_b") {
    p.geometry_b.beta0 = parse_real(key, value);
  } else if (key == "beta_e") {
    p.geometry_e.beta0 = parse_real(key, value);
  } else if (key == "d_b") {
    p.geometry_b.distance = parse_real(key, value);
  } else if (key == "d_e") {
    p.geometry_e.distance = parse_real(key, value);
  } else if (key == "eta") {
    p.geometry_b.eta = parse_real(key, value);
    p.geometry_e.eta = p.geometry_b.eta;
  } else if (key == "slots") {
    p.slots = parse_int(key, value);
    c.design.slots = p.slots;
  } else if (key == "alpha_resolution") {
    c.design.alpha_resolution = parse_real(key, value);
  } else if (key == "mc_samples") {
    c.mc_samples = parse_int(key, value);
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(parse_real(key, value));
    c.design.seed = c.seed;
  } else if (key == "out_dir") {
    c.out_dir = value;
  } else if (key == "format") {
    if (value != "csv" && value != "plot") {
      throw std::runtime_error("config: format must be 'csv' or 'plot'");
    }
    c.format = value;
  } else if (key == "main_gain") {
    c.main_gain = parse_real(key, value);
  } else if (key == "gamma_b_includes_alpha") {
    c.gamma_b_includes_alpha = parse_bool(key, value);
  } else if (key == "sweep_param") {
    if (!c.sweep) c.sweep.emplace();
    c.sweep->param = value;
  } else if (key == "sweep_from") {
    if (!c.sweep) c.sweep.emplace();
    c.sweep->from = parse_real(key, value);
  } else if (key == "sweep_to") {
    if (!c.sweep) c.sweep.emplace();
    c.sweep->to = parse_real(key, value);
  } else if (key == "sweep_points") {
    if (!c.sweep) c.sweep.emplace();
    c.sweep->points = parse_int(key, value);
  } else if (key == "sweep_scale") {
    if (value != "linear" && value != "dB" && value != "log") {
      throw std::runtime_error("config: sweep_scale must be linear, dB or log");
    }
    if (!c.sweep) c.sweep.emplace();
    c.sweep->scale = value;
  } else {
    throw std::runtime_error("config: unknown key '" + key + "'");
  }
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  ScenarioConfig c;
  c.seed = default_seed();
  c.design.seed = c.seed;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: " + path + ":" +
                               std::to_string(lineno) + ": expected key = value");
    }
    apply_override(c, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return c;
}

}  // namespace leakscope::harness
