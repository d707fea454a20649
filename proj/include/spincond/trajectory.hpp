#pragma once

#include <cstdint>
#include <vector>

#include "spincond/types.hpp"

namespace spincond {

// Covariance entries are stored in the fixed order xx, xy, xz, yy, yz, zz.
inline constexpr int kCovEntries = 6;
inline constexpr const char* kCovNames[kCovEntries] = {"vxx", "vxy", "vxz",
                                                       "vyy", "vyz", "vzz"};

inline Mat3 cov_from_entries(const Eigen::Matrix<Real, kCovEntries, 1>& v) {
  Mat3 m;
  m << v(0), v(1), v(2), v(1), v(3), v(4), v(2), v(4), v(5);
  return m;
}

inline Eigen::Matrix<Real, kCovEntries, 1> cov_to_entries(const Mat3& m) {
  Eigen::Matrix<Real, kCovEntries, 1> v;
  v << m(0, 0), m(0, 1), m(0, 2), m(1, 1), m(1, 2), m(2, 2);
  return v;
}

struct ClickRecord {
  Real time = 0.0;
  int port = 0;  // +1 or -1
};

// Sampled observables of a single run: collective-spin means, symmetrized
// covariances and cumulative detector counts on a fixed time grid.
struct TrajectoryRecord {
  std::vector<Real> t;
  std::vector<Vec3> mean;
  std::vector<Eigen::Matrix<Real, kCovEntries, 1>> cov;
  std::vector<Real> clicks_plus_cum;
  std::vector<Real> clicks_minus_cum;
  std::vector<ClickRecord> click_events;  // jump engine only
  std::vector<Real> purity;               // exact engines only (not in CSV)
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;

  size_t size() const { return t.size(); }
};

// Time-binned photocurrent increments from the two homodyne ports.
struct PhotocurrentRecord {
  Real bin_dt = 0.0;
  std::vector<Real> t;  // left edge of each bin
  std::vector<Real> dc_plus;
  std::vector<Real> dc_minus;

  size_t size() const { return t.size(); }
  Real dc_diff(size_t k) const { return dc_plus[k] - dc_minus[k]; }
  std::vector<Real> diff_series() const;
};

// Per-time-point mean, unbiased variance and standard error of each
// observable over an ensemble of identically gridded trajectories.
struct EnsembleStats {
  std::vector<Real> t;
  // columns: fx fy fz vxx vxy vxz vyy vyz vzz clicks+ clicks-
  MatX mean;
  MatX variance;
  MatX std_error;
  int count = 0;

  static constexpr int kColumns = 11;
};

EnsembleStats ensemble_stats(const std::vector<TrajectoryRecord>& records);

}  // namespace spincond
