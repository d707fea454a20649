#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spincond/config.hpp"
#include "spincond/estimator.hpp"
#include "spincond/trajectory.hpp"

namespace spincond {

// End-to-end experiment driver: dispatches a resolved config to an engine,
// applies the compensation field, writes CSV records and a run manifest,
// and estimates the Larmor frequency from the photocurrent.

// Static field that cancels the deterministic light-shift precession
// (f alpha / 2 about z) for the current coupling: B = -hbar alpha f / (2 g_L mu_B) z.
Vec3 compensation_field_tesla(const CouplingVector& g, Real flux, Real lande_g,
                              const Constants& k = {});

struct ExperimentSummary {
  std::string engine;
  Real ratio = 0.0;
  Real nu_larmor_hz = 0.0;
  Real polarization_final = 0.0;   // |<F>|(T) / n
  Real spin_loss = 0.0;            // 1 - |<F>|(T) / |<F>|(0)
  Real envelope_crossing_s = -1.0; // first time the transverse envelope < 1/e
  Real envelope_crossing_periods = -1.0;
  Real min_purity = 1.0;           // exact engines
  Real runtime_s = 0.0;
  std::vector<std::string> warnings;
};

struct ExperimentResult {
  TrajectoryRecord trajectory;   // first trajectory
  PhotocurrentRecord photocurrent;
  std::optional<EnsembleStats> ensemble;  // when trajectories > 1
  EstimationResult estimate;
  ExperimentSummary summary;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& outdir,
                                bool write_files = true);

// One run per value of the overridden "section.key" axis; per-run outputs in
// run_NNN/ subdirectories plus an aggregated sweep.csv.
struct SweepRow {
  std::string value;
  ExperimentSummary summary;
  EstimationResult estimate;
};

std::vector<SweepRow> sweep(const ConfigFile& base, const std::string& axis,
                            const std::vector<std::string>& values,
                            const std::filesystem::path& outdir,
                            bool write_files = true);

void write_manifest(const std::filesystem::path& path, const ExperimentConfig& cfg);
void write_summary(const std::filesystem::path& path, const ExperimentSummary& s,
                   const EstimationResult& est);

}  // namespace spincond
