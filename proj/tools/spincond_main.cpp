// Command-line driver: engine runs, preset experiments, Larmor estimation
// and parameter sweeps on top of the spincond library.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spincond/csv.hpp"
#include "spincond/experiment.hpp"
#include "spincond/presets.hpp"
#include "spincond/pulse.hpp"
#include "spincond/version.hpp"

namespace {

using namespace spincond;

struct GlobalOpts {
  std::string config_path;
  std::string preset;
  std::string out_dir = "out";
  long seed = -1;
  int trajectories = -1;
};

ConfigFile load_config(const GlobalOpts& g) {
  if (!g.preset.empty() && !g.config_path.empty())
    throw std::runtime_error("give either --preset or --config, not both");
  ConfigFile f;
  if (!g.preset.empty())
    f = ConfigFile::parse_string(preset_text(g.preset), "preset:" + g.preset);
  else if (!g.config_path.empty())
    f = ConfigFile::parse_file(g.config_path);
  else
    throw std::runtime_error("a --config file or --preset is required");
  if (g.seed >= 0) f.set("engine", "seed", std::to_string(g.seed));
  if (g.trajectories > 0)
    f.set("engine", "trajectories", std::to_string(g.trajectories));
  return f;
}

void print_summary(const ExperimentResult& r) {
  std::printf("engine              %s\n", r.summary.engine.c_str());
  std::printf("measurement ratio   %.6g\n", r.summary.ratio);
  std::printf("nu_L (true)         %.6g Hz\n", r.summary.nu_larmor_hz);
  if (r.estimate.locked) {
    std::printf("nu_L (estimate)     %.6g Hz  (+- %.3g Hz)\n", r.estimate.nu_hz,
                r.estimate.confidence_hz);
    std::printf("B (estimate)        %.6g mG\n", r.estimate.b_tesla * 1e7);
  } else {
    std::printf("nu_L (estimate)     no lock (peak/median %.3g)\n",
                r.estimate.peak_to_median);
  }
  std::printf("|<F>|(T)/n          %.6g\n", r.summary.polarization_final);
  std::printf("spin loss           %.6g\n", r.summary.spin_loss);
  if (r.summary.envelope_crossing_s >= 0.0)
    std::printf("1/e envelope at     %.6g ms (%.3g Larmor periods)\n",
                r.summary.envelope_crossing_s * 1e3,
                r.summary.envelope_crossing_periods);
  std::printf("runtime             %.3g s\n", r.summary.runtime_s);
  for (const auto& w : r.summary.warnings)
    std::fprintf(stderr, "warning: %s\n", w.c_str());
}

int run_engine(const GlobalOpts& g, const char* engine_override) {
  ConfigFile f = load_config(g);
  if (engine_override) f.set("engine", "engine", engine_override);
  const ExperimentConfig cfg = ExperimentConfig::resolve(f);
  const ExperimentResult r = run_experiment(cfg, g.out_dir);
  print_summary(r);
  std::printf("outputs in          %s\n", g.out_dir.c_str());
  return 0;
}

int run_pulse(const GlobalOpts& g) {
  ConfigFile f = load_config(g);
  const ExperimentConfig cfg = ExperimentConfig::resolve(f);
  if (cfg.pulse_mean_photons <= 0.0)
    throw std::runtime_error("pulse: probe.pulse_mean_photons must be > 0");

  PulseConfig pc;
  pc.mean_photons = cfg.pulse_mean_photons;
  pc.g = cfg.g;

  PhotocountPmf pmf;
  Real exact = 0.0;
  if (cfg.poisson_atoms) {
    const PoissonMixture mix = poisson_mixture(cfg.initial, cfg.n_atoms,
                                               cfg.poisson_n_lo, cfg.poisson_n_hi);
    pmf = joint_photocount_pmf(mix, pc);
    exact = mean_count_difference_exact(mix, pc.mean_photons, cfg.g);
  } else {
    const FockState state =
        build_product_state(cfg.initial, static_cast<int>(cfg.n_atoms));
    pmf = joint_photocount_pmf(state, pc);
    exact = mean_count_difference_exact(state, pc.mean_photons, cfg.g);
  }
  const LinearSignal lin = mean_count_difference_linear(
      cfg.initial, cfg.n_atoms, pc.mean_photons, cfg.g);

  std::filesystem::create_directories(g.out_dir);
  write_pmf_csv(std::filesystem::path(g.out_dir) / "pmf.csv", pmf);
  std::printf("pmf total           %.12g (caps %d x %d)\n", pmf.total,
              pmf.cap_plus(), pmf.cap_minus());
  std::printf("<dC> exact          %.12g\n", exact);
  std::printf("<dC> linearized     %.12g\n", lin.mean_difference);
  std::printf("outputs in          %s\n", g.out_dir.c_str());
  return 0;
}

int run_estimate(const std::string& input, const std::string& band,
                 double lande_g, const std::string& out_dir) {
  const auto colon = band.find(':');
  if (colon == std::string::npos)
    throw std::runtime_error("--band must be LO:HI in Hz");
  const double lo = std::stod(band.substr(0, colon));
  const double hi = std::stod(band.substr(colon + 1));

  const PhotocurrentRecord rec = read_photocurrent_csv(input);
  const EstimationResult est = estimate_larmor(rec, lo, hi, lande_g);
  if (est.locked) {
    std::printf("nu_L estimate       %.6g Hz (+- %.3g Hz)\n", est.nu_hz,
                est.confidence_hz);
    std::printf("B estimate          %.6g mG\n", est.b_tesla * 1e7);
  } else {
    std::printf("no lock (peak/median %.3g)\n", est.peak_to_median);
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_spectrum_csv(std::filesystem::path(out_dir) / "spectrum.csv",
                       est.spectrum);
    std::printf("outputs in          %s\n", out_dir.c_str());
  }
  return est.locked ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spincond: continuously monitored spin-1 condensate simulator"};
  app.set_version_flag("--version", spincond::kVersion);
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "config file path");
  app.add_option("--preset", g.preset, "built-in preset (fig1|fig2|fig1_exact|fig2_exact)");
  app.add_option("--out", g.out_dir, "output directory");
  app.add_option("--seed", g.seed, "override engine.seed");
  app.add_option("--trajectories", g.trajectories, "override engine.trajectories");

  auto* simulate = app.add_subcommand("simulate", "run one engine from a config");
  simulate->require_subcommand(1);
  simulate->fallthrough();
  auto* sim_pulse = simulate->add_subcommand("pulse", "single-pulse photocount PMF");
  auto* sim_jumps = simulate->add_subcommand("jumps", "quantum-jump trajectories");
  auto* sim_sme = simulate->add_subcommand("sme", "diffusion-limit SME trajectories");
  auto* sim_moments = simulate->add_subcommand("moments", "gaussian moment trajectories");
  for (auto* sub : {sim_pulse, sim_jumps, sim_sme, sim_moments}) sub->fallthrough();

  auto* experiment =
      app.add_subcommand("experiment", "end-to-end magnetometry run");
  experiment->fallthrough();

  auto* estimate = app.add_subcommand("estimate", "Larmor estimate from a photocurrent CSV");
  std::string est_input, est_band;
  double est_lande = -0.5;
  estimate->add_option("--input", est_input, "photocurrent.csv path")->required();
  estimate->add_option("--band", est_band, "search band LO:HI in Hz")->required();
  estimate->add_option("--g-lande", est_lande, "Lande g factor for the field estimate");

  auto* sweep_cmd = app.add_subcommand("sweep", "repeat an experiment along one axis");
  std::string axis;
  std::vector<std::string> values;
  sweep_cmd->add_option("--axis", axis, "config key to vary, e.g. engine.seed")->required();
  sweep_cmd->add_option("--values", values, "values for the axis")
      ->required()
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim_pulse->parsed()) return run_pulse(g);
    if (sim_jumps->parsed()) return run_engine(g, "jumps");
    if (sim_sme->parsed()) return run_engine(g, "sme");
    if (sim_moments->parsed()) return run_engine(g, "moments");
    if (experiment->parsed()) return run_engine(g, nullptr);
    if (estimate->parsed())
      return run_estimate(est_input, est_band, est_lande, g.out_dir);
    if (sweep_cmd->parsed()) {
      const ConfigFile base = load_config(g);
      const auto rows = spincond::sweep(base, axis, values, g.out_dir);
      for (size_t i = 0; i < rows.size(); ++i)
        std::printf("%zu  %s = %s  ratio %.4g  %s\n", i, axis.c_str(),
                    rows[i].value.c_str(), rows[i].summary.ratio,
                    rows[i].estimate.locked ? "locked" : "no lock");
      std::printf("outputs in          %s\n", g.out_dir.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
