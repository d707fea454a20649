#include "spincond/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "spincond/experiment.hpp"
#include "spincond/sme.hpp"

namespace spincond {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"atoms",
       {"n", "nbar", "init_axis", "c_plus_re", "c_plus_im", "c_zero_re",
        "c_zero_im", "c_minus_re", "c_minus_im", "poisson_n_lo", "poisson_n_hi"}},
      {"field", {"b_x_mG", "b_y_mG", "b_z_mG", "g_lande", "compensation"}},
      {"probe",
       {"g_plus", "g_zero", "g_minus", "qnd_g", "flux_per_s", "intensity_ratio",
        "detuning2_MHz", "beam_waist_um", "interaction_time_ns",
        "pulse_mean_photons"}},
      {"engine",
       {"engine", "total_time_ms", "dt_us", "jump_dt_us", "sample_stride",
        "normalize_every", "include_beta", "trajectories", "seed", "bin_ms",
        "band_lo_hz", "band_hi_hz", "exact_n_cap"}},
      {"constants",
       {"mu_b_over_h_MHz_per_G", "hyperfine_MHz", "d1_wavelength_nm",
        "i_sat_mW_cm2", "gamma_natural_MHz"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path.string());
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
  ConfigFile cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                 ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty())
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected 'key = value' inside a section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": empty key or value");
    if (cfg.sections_[section].count(key))
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": duplicate key '" + key + "'");
    cfg.sections_[section][key] = value;
  }
  cfg.validate();
  return cfg;
}

bool ConfigFile::schema_has(const std::string& section, const std::string& key) {
  const auto it = schema().find(section);
  return it != schema().end() && it->second.count(key) > 0;
}

void ConfigFile::validate() const {
  for (const auto& [section, keys] : sections_) {
    const auto it = schema().find(section);
    if (it == schema().end())
      throw std::runtime_error(origin_ + ": unknown section [" + section + "]");
    for (const auto& [key, value] : keys)
      if (!it->second.count(key))
        throw std::runtime_error(origin_ + ": unknown key '" + key +
                                 "' in section [" + section + "]");
  }
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

const std::string& ConfigFile::get(const std::string& section,
                                   const std::string& key) const {
  const auto it = sections_.find(section);
  if (it == sections_.end() || !it->second.count(key))
    throw std::runtime_error("config: missing required key " + section + "." + key);
  return it->second.at(key);
}

std::string ConfigFile::get_or(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

Real ConfigFile::real(const std::string& section, const std::string& key) const {
  const std::string& v = get(section, key);
  size_t pos = 0;
  const Real out = std::stod(v, &pos);
  if (pos != v.size())
    throw std::runtime_error("config: " + section + "." + key +
                             " is not a number: '" + v + "'");
  return out;
}

Real ConfigFile::real_or(const std::string& section, const std::string& key,
                         Real fallback) const {
  return has(section, key) ? real(section, key) : fallback;
}

long ConfigFile::integer_or(const std::string& section, const std::string& key,
                            long fallback) const {
  if (!has(section, key)) return fallback;
  const std::string& v = get(section, key);
  size_t pos = 0;
  const long out = std::stol(v, &pos);
  if (pos != v.size())
    throw std::runtime_error("config: " + section + "." + key +
                             " is not an integer: '" + v + "'");
  return out;
}

bool ConfigFile::boolean_or(const std::string& section, const std::string& key,
                            bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string& v = get(section, key);
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw std::runtime_error("config: " + section + "." + key +
                           " is not a boolean: '" + v + "'");
}

void ConfigFile::set(const std::string& section, const std::string& key,
                     const std::string& value) {
  if (!schema_has(section, key))
    throw std::runtime_error("config: unknown key " + section + "." + key);
  sections_[section][key] = value;
}

std::string ConfigFile::canonical() const {
  std::string out;
  for (const auto& [section, keys] : sections_) {
    out += "[" + section + "]\n";
    for (const auto& [key, value] : keys) out += key + " = " + value + "\n";
  }
  return out;
}

std::uint64_t ConfigFile::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : canonical()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_string(EngineKind k) {
  switch (k) {
    case EngineKind::Jumps: return "jumps";
    case EngineKind::Sme: return "sme";
    case EngineKind::Moments: return "moments";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::resolve(const ConfigFile& file) {
  ExperimentConfig cfg;

  // constants (overridable)
  cfg.constants.mu_b_over_h_hz_per_g =
      file.real_or("constants", "mu_b_over_h_MHz_per_G", 1.399624) * 1e6;
  cfg.constants.hyperfine_split_hz = file.real_or("constants", "hyperfine_MHz", 814.5) * 1e6;
  cfg.constants.d1_wavelength_m =
      file.real_or("constants", "d1_wavelength_nm", 794.979) * 1e-9;
  cfg.constants.i_sat_w_m2 = file.real_or("constants", "i_sat_mW_cm2", 1.49) * 10.0;
  cfg.constants.natural_linewidth_hz =
      file.real_or("constants", "gamma_natural_MHz", 5.75) * 1e6;

  // atoms
  const bool has_n = file.has("atoms", "n");
  const bool has_nbar = file.has("atoms", "nbar");
  if (has_n == has_nbar)
    throw std::runtime_error("config: specify exactly one of atoms.n / atoms.nbar");
  cfg.poisson_atoms = has_nbar;
  cfg.n_atoms = has_n ? file.real("atoms", "n") : file.real("atoms", "nbar");
  if (cfg.n_atoms <= 0.0) throw std::runtime_error("config: atom number must be > 0");
  if (cfg.poisson_atoms) {
    const Real nb = cfg.n_atoms;
    const int lo_default = std::max(0, static_cast<int>(nb - 8.0 * std::sqrt(nb) - 4.0));
    const int hi_default = static_cast<int>(nb + 8.0 * std::sqrt(nb) + 4.0) + 1;
    cfg.poisson_n_lo = static_cast<int>(file.integer_or("atoms", "poisson_n_lo", lo_default));
    cfg.poisson_n_hi = static_cast<int>(file.integer_or("atoms", "poisson_n_hi", hi_default));
  }

  const std::string axis = file.get_or("atoms", "init_axis", "x");
  if (axis == "custom") {
    cfg.initial = Spinor{{file.real_or("atoms", "c_plus_re", 0.0),
                          file.real_or("atoms", "c_plus_im", 0.0)},
                         {file.real_or("atoms", "c_zero_re", 0.0),
                          file.real_or("atoms", "c_zero_im", 0.0)},
                         {file.real_or("atoms", "c_minus_re", 0.0),
                          file.real_or("atoms", "c_minus_im", 0.0)}};
    const Real nrm = std::sqrt(cfg.initial.norm_squared());
    if (nrm <= 0.0) throw std::runtime_error("config: custom spinor is zero");
    cfg.initial.plus /= nrm;
    cfg.initial.zero /= nrm;
    cfg.initial.minus /= nrm;
  } else if (axis.size() == 1 && (axis[0] == 'x' || axis[0] == 'y' || axis[0] == 'z')) {
    cfg.initial = Spinor::polarized(axis[0]);
  } else {
    throw std::runtime_error("config: atoms.init_axis must be x|y|z|custom");
  }

  // field (millligauss -> tesla: 1 mG = 1e-7 T)
  cfg.field.b_tesla = Vec3(file.real_or("field", "b_x_mG", 0.0),
                           file.real_or("field", "b_y_mG", 0.0),
                           file.real_or("field", "b_z_mG", 0.0)) *
                      1e-7;
  cfg.field.lande_g = file.real_or("field", "g_lande", -0.5);
  cfg.compensation = file.boolean_or("field", "compensation", false);

  // probe: explicit G (or qnd_g) + flux, or the intensity conversion chain
  const bool has_g = file.has("probe", "g_plus") || file.has("probe", "g_zero") ||
                     file.has("probe", "g_minus");
  const bool has_qnd = file.has("probe", "qnd_g");
  const bool has_intensity = file.has("probe", "intensity_ratio");
  if (has_g + has_qnd + has_intensity > 1)
    throw std::runtime_error(
        "config: probe coupling is over-specified; use one of g_*, qnd_g or the "
        "intensity chain");
  if (has_qnd) {
    cfg.g = qnd_coupling(file.real("probe", "qnd_g"));
  } else if (has_g) {
    cfg.g = CouplingVector{file.real_or("probe", "g_plus", 0.0),
                           file.real_or("probe", "g_zero", 0.0),
                           file.real_or("probe", "g_minus", 0.0)};
  } else if (has_intensity) {
    OpticalParams opt;
    opt.intensity_ratio = file.real("probe", "intensity_ratio");
    opt.detuning2_hz = file.real("probe", "detuning2_MHz") * 1e6;
    opt.interaction_time_s = file.real("probe", "interaction_time_ns") * 1e-9;
    cfg.g = coupling_vector(opt, cfg.constants);
    if (!file.has("probe", "flux_per_s"))
      cfg.flux = flux_from_intensity(opt.intensity_ratio,
                                     file.real("probe", "beam_waist_um") * 1e-6,
                                     cfg.constants.d1_wavelength_m, cfg.constants);
  }
  if (file.has("probe", "flux_per_s")) cfg.flux = file.real("probe", "flux_per_s");
  cfg.pulse_mean_photons = file.real_or("probe", "pulse_mean_photons", 0.0);

  // engine
  const std::string engine = file.get_or("engine", "engine", "moments");
  if (engine == "jumps")
    cfg.engine = EngineKind::Jumps;
  else if (engine == "sme")
    cfg.engine = EngineKind::Sme;
  else if (engine == "moments")
    cfg.engine = EngineKind::Moments;
  else
    throw std::runtime_error("config: engine.engine must be jumps|sme|moments");

  cfg.total_time = file.real_or("engine", "total_time_ms", 0.0) * 1e-3;
  cfg.dt = file.real_or("engine", "dt_us", 0.0) * 1e-6;
  cfg.jump_dt = file.real_or("engine", "jump_dt_us", 0.0) * 1e-6;
  cfg.sample_stride = static_cast<int>(file.integer_or("engine", "sample_stride", 100));
  cfg.normalize_every = static_cast<int>(file.integer_or("engine", "normalize_every", 1));
  cfg.include_beta = file.boolean_or("engine", "include_beta", true);
  cfg.trajectories = static_cast<int>(file.integer_or("engine", "trajectories", 1));
  cfg.seed = static_cast<std::uint64_t>(file.integer_or("engine", "seed", 1));
  cfg.bin_dt = file.real_or("engine", "bin_ms", 0.0) * 1e-3;
  cfg.exact_n_cap = static_cast<int>(file.integer_or("engine", "exact_n_cap", 20));

  // derived
  cfg.nu_larmor_hz = larmor_frequency_hz(cfg.field, cfg.constants);
  cfg.affine = affine_decomposition(cfg.g);
  cfg.ratio = cfg.nu_larmor_hz > 0.0
                  ? measurement_strength(cfg.g, cfg.flux, cfg.nu_larmor_hz)
                  : 0.0;
  cfg.b_comp_tesla = compensation_field_tesla(cfg.g, cfg.flux, cfg.field.lande_g,
                                              cfg.constants);

  cfg.band_lo_hz = file.real_or("engine", "band_lo_hz",
                                std::max(1.0, 0.5 * cfg.nu_larmor_hz));
  cfg.band_hi_hz = file.real_or("engine", "band_hi_hz", 1.5 * cfg.nu_larmor_hz);

  const Real reach = cfg.n_atoms * cfg.g.max_abs();
  if (reach > 0.1)
    cfg.warnings.push_back("coupling: n*max|G| = " + std::to_string(reach) +
                           " > 0.1; linearized signal forms are outside their domain");
  if (cfg.engine == EngineKind::Sme && cfg.dt > 0.0) {
    SmeParams sp;
    sp.flux = cfg.flux;
    sp.g = cfg.g;
    sp.dt = cfg.dt;
    for (auto& w : sme_warnings(sp, static_cast<int>(cfg.n_atoms)))
      cfg.warnings.push_back(w);
  }

  cfg.config_hash = file.hash();
  cfg.echo = file.canonical();
  return cfg;
}

}  // namespace spincond
