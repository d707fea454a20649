#include "spincond/trajectory.hpp"

namespace spincond {

std::vector<Real> PhotocurrentRecord::diff_series() const {
  std::vector<Real> d(t.size());
  for (size_t k = 0; k < t.size(); ++k) d[k] = dc_plus[k] - dc_minus[k];
  return d;
}

EnsembleStats ensemble_stats(const std::vector<TrajectoryRecord>& records) {
  if (records.size() < 2)
    throw std::invalid_argument("ensemble_stats: need at least 2 records");
  const size_t npts = records.front().size();
  for (const auto& r : records) {
    if (r.size() != npts)
      throw std::invalid_argument("ensemble_stats: time-grid size mismatch");
    for (size_t k = 0; k < npts; ++k)
      if (r.t[k] != records.front().t[k])
        throw std::invalid_argument("ensemble_stats: time-grid value mismatch");
  }

  const int n = static_cast<int>(records.size());
  EnsembleStats stats;
  stats.count = n;
  stats.t = records.front().t;
  stats.mean = MatX::Zero(npts, EnsembleStats::kColumns);
  stats.variance = MatX::Zero(npts, EnsembleStats::kColumns);

  auto row = [](const TrajectoryRecord& r, size_t k) {
    Eigen::Matrix<Real, 1, EnsembleStats::kColumns> x;
    x << r.mean[k](0), r.mean[k](1), r.mean[k](2), r.cov[k](0), r.cov[k](1),
        r.cov[k](2), r.cov[k](3), r.cov[k](4), r.cov[k](5), r.clicks_plus_cum[k],
        r.clicks_minus_cum[k];
    return x;
  };

  for (size_t k = 0; k < npts; ++k) {
    for (const auto& r : records) stats.mean.row(k) += row(r, k);
    stats.mean.row(k) /= n;
    for (const auto& r : records) {
      const auto d = (row(r, k) - stats.mean.row(k)).eval();
      stats.variance.row(k) += d.cwiseProduct(d);
    }
    stats.variance.row(k) /= (n - 1);
  }
  stats.std_error = (stats.variance / n).cwiseSqrt();
  return stats;
}

}  // namespace spincond
