#include "spincond/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "spincond/csv.hpp"
#include "spincond/jump.hpp"
#include "spincond/moments.hpp"
#include "spincond/observables.hpp"
#include "spincond/sme.hpp"
#include "spincond/version.hpp"

namespace spincond {

namespace fs = std::filesystem;

Vec3 compensation_field_tesla(const CouplingVector& g, Real flux, Real lande_g,
                              const Constants& k) {
  if (lande_g == 0.0)
    throw std::invalid_argument("compensation_field: lande_g must be nonzero");
  const Real alpha = affine_decomposition(g).alpha;
  // cancels the (f alpha / 2) F_z precession term of the light shift
  const Real bz = -0.5 * alpha * flux / (lande_g * k.mu_b_over_hbar_rad_per_tesla());
  return Vec3(0.0, 0.0, bz);
}

namespace {

// Moments of a product state: cumulants are n times the single-atom ones.
MomentState product_state_moments(const Spinor& c, Real n_atoms) {
  const SpinObservables obs1(1);
  const DensityMatrix rho1 = pure_density(build_product_state(c, 1));
  const Vec3 mu1 = obs1.mean(rho1);
  const auto v1 = obs1.cov(rho1, mu1);
  MomentState s;
  s.mean = n_atoms * mu1;
  s.cov = n_atoms * cov_from_entries(v1);
  return s;
}

PhotocurrentRecord bin_click_events(const TrajectoryRecord& rec, Real total_time,
                                    Real bin_dt) {
  PhotocurrentRecord out;
  out.bin_dt = bin_dt;
  const size_t bins = static_cast<size_t>(std::floor(total_time / bin_dt + 0.5));
  out.t.resize(bins);
  out.dc_plus.assign(bins, 0.0);
  out.dc_minus.assign(bins, 0.0);
  for (size_t b = 0; b < bins; ++b) out.t[b] = b * bin_dt;
  for (const auto& ev : rec.click_events) {
    size_t b = static_cast<size_t>(ev.time / bin_dt);
    if (b >= bins) b = bins - 1;
    (ev.port > 0 ? out.dc_plus[b] : out.dc_minus[b]) += 1.0;
  }
  return out;
}

void append_envelope(ExperimentSummary& s, const TrajectoryRecord& rec,
                     const Vec3& b_tesla, Real nu_larmor_hz, Real n_atoms) {
  if (rec.size() == 0) return;
  const Vec3 mu0 = rec.mean.front();
  const Vec3 muT = rec.mean.back();
  s.polarization_final = muT.norm() / n_atoms;
  s.spin_loss = mu0.norm() > 0.0 ? 1.0 - muT.norm() / mu0.norm() : 0.0;

  Vec3 bhat = Vec3::UnitZ();
  if (b_tesla.norm() > 0.0) bhat = b_tesla.normalized();
  auto transverse = [&](const Vec3& mu) { return (mu - mu.dot(bhat) * bhat).norm(); };
  const Real e0 = transverse(mu0);
  if (e0 <= 0.0) return;
  for (size_t k = 0; k < rec.size(); ++k) {
    if (transverse(rec.mean[k]) < e0 / M_E) {
      s.envelope_crossing_s = rec.t[k];
      if (nu_larmor_hz > 0.0)
        s.envelope_crossing_periods = rec.t[k] * nu_larmor_hz;
      break;
    }
  }
}

}  // namespace

void write_manifest(const fs::path& path, const ExperimentConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(cfg.config_hash));
  out << "# run manifest\n";
  out << "version = " << kVersion << "\n";
  out << "engine = " << to_string(cfg.engine) << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "config_hash = " << hash << "\n";
  out << "nu_larmor_hz = " << cfg.nu_larmor_hz << "\n";
  out << "measurement_ratio = " << cfg.ratio << "\n";
  out << "coupling_alpha = " << cfg.affine.alpha << "\n";
  out << "coupling_beta = " << cfg.affine.beta << "\n";
  out << "coupling_gamma = " << cfg.affine.gamma << "\n";
  out << "compensation_b_z_mG = " << cfg.b_comp_tesla(2) * 1e7 << "\n";
  for (const auto& w : cfg.warnings) out << "warning = " << w << "\n";
  out << "\n# resolved configuration\n" << cfg.echo;
}

void write_summary(const fs::path& path, const ExperimentSummary& s,
                   const EstimationResult& est) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "engine = " << s.engine << "\n";
  out << "measurement_ratio = " << s.ratio << "\n";
  out << "nu_larmor_true_hz = " << s.nu_larmor_hz << "\n";
  out << "estimator_locked = " << (est.locked ? "true" : "false") << "\n";
  if (est.locked) {
    out << "nu_estimate_hz = " << est.nu_hz << "\n";
    out << "confidence_hz = " << est.confidence_hz << "\n";
    out << "b_estimate_mG = " << est.b_tesla * 1e7 << "\n";
  }
  out << "peak_to_median = " << est.peak_to_median << "\n";
  out << "polarization_final = " << s.polarization_final << "\n";
  out << "spin_loss = " << s.spin_loss << "\n";
  out << "envelope_crossing_s = " << s.envelope_crossing_s << "\n";
  out << "envelope_crossing_periods = " << s.envelope_crossing_periods << "\n";
  out << "min_purity = " << s.min_purity << "\n";
  out << "runtime_s = " << s.runtime_s << "\n";
  for (const auto& w : s.warnings) out << "warning = " << w << "\n";
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const fs::path& outdir,
                                bool write_files) {
  const auto t_start = std::chrono::steady_clock::now();
  if (cfg.total_time <= 0.0)
    throw std::invalid_argument("run_experiment: engine.total_time_ms must be > 0");

  ExperimentResult res;
  res.summary.engine = to_string(cfg.engine);
  res.summary.ratio = cfg.ratio;
  res.summary.nu_larmor_hz = cfg.nu_larmor_hz;
  res.summary.warnings = cfg.warnings;

  const bool exact_engine = cfg.engine != EngineKind::Moments;
  if (exact_engine && cfg.poisson_atoms)
    throw std::invalid_argument(
        "run_experiment: the exact engines need a fixed atom number; use "
        "atoms.n or the moments engine");

  FieldParams field_total = cfg.field;
  if (cfg.compensation && exact_engine)
    field_total.b_tesla += compensation_field_tesla(cfg.g, cfg.flux,
                                                    cfg.field.lande_g, cfg.constants);

  const Real default_bin =
      cfg.bin_dt > 0.0 ? cfg.bin_dt : std::max(cfg.total_time / 512.0, 1e-5);

  switch (cfg.engine) {
    case EngineKind::Jumps: {
      const int n = static_cast<int>(cfg.n_atoms);
      if (n > cfg.exact_n_cap)
        throw std::invalid_argument(
            "run_experiment: n exceeds the exact-engine cap; use the moments "
            "engine");
      if (cfg.jump_dt <= 0.0)
        throw std::invalid_argument("run_experiment: engine.jump_dt_us required");
      JumpRunConfig jc;
      jc.params = JumpParams{cfg.flux, cfg.jump_dt, cfg.g, field_total, cfg.constants};
      jc.initial = build_product_state(cfg.initial, n);
      jc.total_time = cfg.total_time;
      jc.sample_stride = cfg.sample_stride;
      jc.seed = cfg.seed;
      if (cfg.trajectories > 1) {
        auto records = run_jump_ensemble(jc, cfg.trajectories);
        res.ensemble = ensemble_stats(records);
        jc.keep_click_events = true;
        jc.seed = Rng::stream_seed(cfg.seed, 0);
        res.trajectory = run_jump_trajectory(jc);
      } else {
        res.trajectory = run_jump_trajectory(jc);
      }
      res.photocurrent = bin_click_events(res.trajectory, cfg.total_time, default_bin);
      break;
    }
    case EngineKind::Sme: {
      const int n = static_cast<int>(cfg.n_atoms);
      if (cfg.dt <= 0.0)
        throw std::invalid_argument("run_experiment: engine.dt_us required");
      SmeRunConfig sc;
      sc.params = SmeParams{cfg.flux,         cfg.g,
                            field_total,      cfg.dt,
                            cfg.normalize_every, cfg.include_beta,
                            cfg.constants};
      sc.initial = build_product_state(cfg.initial, n);
      sc.total_time = cfg.total_time;
      sc.sample_stride = cfg.sample_stride;
      sc.bin_dt = default_bin;
      sc.seed = cfg.seed;
      sc.exact_n_cap = cfg.exact_n_cap;
      if (cfg.trajectories > 1) {
        auto runs = run_sme_ensemble(sc, cfg.trajectories);
        std::vector<TrajectoryRecord> records;
        records.reserve(runs.size());
        for (auto& r : runs) records.push_back(std::move(r.trajectory));
        res.ensemble = ensemble_stats(records);
        sc.seed = Rng::stream_seed(cfg.seed, 0);
        auto first = run_sme(sc);
        res.trajectory = std::move(first.trajectory);
        res.photocurrent = std::move(first.photocurrent);
      } else {
        auto run = run_sme(sc);
        res.trajectory = std::move(run.trajectory);
        res.photocurrent = std::move(run.photocurrent);
      }
      break;
    }
    case EngineKind::Moments: {
      if (cfg.dt <= 0.0)
        throw std::invalid_argument("run_experiment: engine.dt_us required");
      MomentRunConfig mc;
      mc.params.n_atoms = cfg.n_atoms;
      mc.params.alpha = cfg.affine.alpha;
      mc.params.gamma = cfg.affine.gamma;
      mc.params.flux = cfg.flux;
      mc.params.omega_rad_s = larmor_omega_rad_s(cfg.field, cfg.constants);
      mc.params.light_shift_cancelled = cfg.compensation;
      mc.params.dt = cfg.dt;
      mc.initial = product_state_moments(cfg.initial, cfg.n_atoms);
      mc.total_time = cfg.total_time;
      mc.sample_stride = cfg.sample_stride;
      mc.bin_dt = default_bin;
      mc.seed = cfg.seed;
      if (cfg.trajectories > 1) {
        auto runs = run_moments_ensemble(mc, cfg.trajectories);
        std::vector<TrajectoryRecord> records;
        records.reserve(runs.size());
        for (auto& r : runs) records.push_back(std::move(r.trajectory));
        res.ensemble = ensemble_stats(records);
        mc.seed = Rng::stream_seed(cfg.seed, 0);
        auto first = run_moments(mc);
        res.trajectory = std::move(first.trajectory);
        res.photocurrent = std::move(first.photocurrent);
      } else {
        auto run = run_moments(mc);
        res.trajectory = std::move(run.trajectory);
        res.photocurrent = std::move(run.photocurrent);
      }
      break;
    }
  }

  append_envelope(res.summary, res.trajectory, cfg.field.b_tesla, cfg.nu_larmor_hz,
                  cfg.n_atoms);
  for (Real p : res.trajectory.purity)
    res.summary.min_purity = std::min(res.summary.min_purity, p);

  if (cfg.band_hi_hz > cfg.band_lo_hz && cfg.band_lo_hz >= 0.0) {
    try {
      res.estimate = estimate_larmor(res.photocurrent, cfg.band_lo_hz,
                                     cfg.band_hi_hz, cfg.field.lande_g, cfg.constants);
    } catch (const std::exception& e) {
      res.estimate.locked = false;
      res.summary.warnings.push_back(std::string("estimator: ") + e.what());
    }
  }

  res.summary.runtime_s =
      std::chrono::duration<Real>(std::chrono::steady_clock::now() - t_start).count();

  if (write_files) {
    fs::create_directories(outdir);
    write_manifest(outdir / "manifest.txt", cfg);
    write_trajectory_csv(outdir / "trajectory.csv", res.trajectory);
    write_photocurrent_csv(outdir / "photocurrent.csv", res.photocurrent);
    if (cfg.engine == EngineKind::Jumps)
      write_clicks_csv(outdir / "clicks.csv", res.trajectory);
    if (res.ensemble) write_ensemble_csv(outdir / "ensemble.csv", *res.ensemble);
    if (!res.estimate.spectrum.freq_hz.empty())
      write_spectrum_csv(outdir / "spectrum.csv", res.estimate.spectrum);
    write_summary(outdir / "summary.txt", res.summary, res.estimate);
  }
  return res;
}

std::vector<SweepRow> sweep(const ConfigFile& base, const std::string& axis,
                            const std::vector<std::string>& values,
                            const fs::path& outdir, bool write_files) {
  const auto dot = axis.find('.');
  if (dot == std::string::npos)
    throw std::invalid_argument("sweep: axis must be written section.key");
  const std::string section = axis.substr(0, dot);
  const std::string key = axis.substr(dot + 1);
  if (!ConfigFile::schema_has(section, key))
    throw std::invalid_argument("sweep: unrecognized axis " + axis);
  if (values.empty()) throw std::invalid_argument("sweep: no values given");

  std::vector<SweepRow> rows;
  for (size_t i = 0; i < values.size(); ++i) {
    ConfigFile f = base;
    f.set(section, key, values[i]);
    const ExperimentConfig cfg = ExperimentConfig::resolve(f);
    char sub[32];
    std::snprintf(sub, sizeof(sub), "run_%03zu", i);
    const ExperimentResult r =
        run_experiment(cfg, outdir / sub, write_files);
    rows.push_back(SweepRow{values[i], r.summary, r.estimate});
  }

  if (write_files) {
    fs::create_directories(outdir);
    std::FILE* f = std::fopen((outdir / "sweep.csv").string().c_str(), "wb");
    if (!f) throw std::runtime_error("cannot write sweep.csv");
    std::fprintf(f,
                 "index,%s,ratio,locked,nu_hat_hz,confidence_hz,b_hat_mG,"
                 "spin_loss,envelope_periods,min_purity\n",
                 axis.c_str());
    for (size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      std::fprintf(f, "%zu,%s,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i,
                   r.value.c_str(), r.summary.ratio, r.estimate.locked ? 1 : 0,
                   r.estimate.nu_hz, r.estimate.confidence_hz,
                   r.estimate.b_tesla * 1e7, r.summary.spin_loss,
                   r.summary.envelope_crossing_periods, r.summary.min_purity);
    }
    std::fclose(f);
  }
  return rows;
}

}  // namespace spincond
