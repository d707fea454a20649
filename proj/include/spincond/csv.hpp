#pragma once

#include <filesystem>
#include <string>

#include "spincond/estimator.hpp"
#include "spincond/pulse.hpp"
#include "spincond/trajectory.hpp"

namespace spincond {

// Fixed CSV schemas. Values are printed with %.17g so that identical runs
// produce byte-identical files.

void write_trajectory_csv(const std::filesystem::path& path,
                          const TrajectoryRecord& rec);
void write_clicks_csv(const std::filesystem::path& path, const TrajectoryRecord& rec);
void write_photocurrent_csv(const std::filesystem::path& path,
                            const PhotocurrentRecord& rec);
void write_ensemble_csv(const std::filesystem::path& path, const EnsembleStats& stats);
void write_pmf_csv(const std::filesystem::path& path, const PhotocountPmf& pmf);
void write_spectrum_csv(const std::filesystem::path& path, const Periodogram& spec);

PhotocurrentRecord read_photocurrent_csv(const std::filesystem::path& path);

}  // namespace spincond
