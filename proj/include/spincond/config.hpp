#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "spincond/coupling.hpp"
#include "spincond/types.hpp"

namespace spincond {

// Sectioned key-value config files. Units are explicit in key names
// (b_y_mG, total_time_ms, detuning2_MHz, ...); unknown sections or keys are
// rejected so that typos cannot silently fall back to defaults.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::filesystem::path& path);
  static ConfigFile parse_string(const std::string& text,
                                 const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;
  const std::string& get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  Real real(const std::string& section, const std::string& key) const;
  Real real_or(const std::string& section, const std::string& key, Real fallback) const;
  long integer_or(const std::string& section, const std::string& key,
                  long fallback) const;
  bool boolean_or(const std::string& section, const std::string& key,
                  bool fallback) const;

  void set(const std::string& section, const std::string& key,
           const std::string& value);

  // Sorted section/key serialization; input to the config hash.
  std::string canonical() const;
  std::uint64_t hash() const;  // FNV-1a of canonical()

  // Throws on sections or keys outside the known schema.
  void validate() const;

  static bool schema_has(const std::string& section, const std::string& key);

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string origin_;
};

enum class EngineKind { Jumps, Sme, Moments };

std::string to_string(EngineKind k);

// Fully resolved experiment parameters plus derived quantities.
struct ExperimentConfig {
  // atoms
  bool poisson_atoms = false;
  Real n_atoms = 0.0;  // n, or nbar when poisson_atoms
  int poisson_n_lo = -1, poisson_n_hi = -1;
  Spinor initial;

  // field
  FieldParams field;
  bool compensation = false;

  // probe
  CouplingVector g;
  Real flux = 0.0;
  Real pulse_mean_photons = 0.0;

  // engine
  EngineKind engine = EngineKind::Moments;
  Real total_time = 0.0;
  Real dt = 0.0;       // sme / moments integrator step
  Real jump_dt = 0.0;  // jump engine step
  int sample_stride = 100;
  int normalize_every = 1;
  bool include_beta = true;
  int trajectories = 1;
  std::uint64_t seed = 1;
  Real bin_dt = 0.0;
  Real band_lo_hz = 0.0, band_hi_hz = 0.0;
  int exact_n_cap = 20;

  Constants constants;

  // derived
  Real nu_larmor_hz = 0.0;
  AffineCoupling affine;
  Real ratio = 0.0;  // measurement strength alpha f / nu_L (0 when nu_L = 0)
  Vec3 b_comp_tesla = Vec3::Zero();
  std::vector<std::string> warnings;
  std::uint64_t config_hash = 0;
  std::string echo;  // canonical config text

  static ExperimentConfig resolve(const ConfigFile& file);
};

}  // namespace spincond
