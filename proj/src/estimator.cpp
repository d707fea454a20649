#include "spincond/estimator.hpp"

#include <algorithm>
#include <cmath>

namespace spincond {

namespace {
// Peak must stand this far above the in-band median power to count as a lock.
constexpr Real kLockThreshold = 12.0;

Real median(std::vector<Real> v) {
  if (v.empty()) return 0.0;
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[mid];
}
}  // namespace

Periodogram periodogram(const std::vector<Real>& samples, Real sample_dt,
                        Real f_lo, Real f_hi) {
  const size_t n = samples.size();
  if (n < 4) throw std::invalid_argument("periodogram: record too short");
  if (sample_dt <= 0.0 || f_hi <= f_lo)
    throw std::invalid_argument("periodogram: bad sampling step or band");

  // mean removal + Hann window
  Real mean = 0.0;
  for (Real s : samples) mean += s;
  mean /= static_cast<Real>(n);
  std::vector<Real> w(n);
  for (size_t k = 0; k < n; ++k) {
    const Real hann =
        0.5 * (1.0 - std::cos(2.0 * M_PI * k / static_cast<Real>(n - 1)));
    w[k] = (samples[k] - mean) * hann;
  }

  const Real df = 1.0 / (static_cast<Real>(n) * sample_dt);
  const Real nyquist = 0.5 / sample_dt;
  long m_lo = std::max(1L, std::lround(std::floor(f_lo / df)));
  long m_hi = std::min(static_cast<long>(n / 2), std::lround(std::ceil(f_hi / df)));
  if (f_hi > nyquist) m_hi = static_cast<long>(n / 2);
  if (m_hi <= m_lo)
    throw std::invalid_argument("periodogram: band contains no frequency bins");

  Periodogram out;
  out.freq_hz.reserve(static_cast<size_t>(m_hi - m_lo + 1));
  out.power.reserve(static_cast<size_t>(m_hi - m_lo + 1));
  for (long m = m_lo; m <= m_hi; ++m) {
    Real re = 0.0, im = 0.0;
    const Real phase_step = -2.0 * M_PI * static_cast<Real>(m) / static_cast<Real>(n);
    for (size_t k = 0; k < n; ++k) {
      const Real ph = phase_step * static_cast<Real>(k);
      re += w[k] * std::cos(ph);
      im += w[k] * std::sin(ph);
    }
    out.freq_hz.push_back(m * df);
    out.power.push_back((re * re + im * im) / static_cast<Real>(n));
  }
  return out;
}

EstimationResult estimate_larmor(const PhotocurrentRecord& record, Real band_lo_hz,
                                 Real band_hi_hz, Real lande_g, const Constants& k) {
  if (record.size() < 4)
    throw std::invalid_argument("estimate_larmor: empty photocurrent record");
  const Real span = record.size() * record.bin_dt;
  const Real band_center = 0.5 * (band_lo_hz + band_hi_hz);
  if (span * band_center < 10.0)
    throw std::invalid_argument(
        "estimate_larmor: record spans fewer than 10 cycles of the band center");

  EstimationResult res;
  res.spectrum = periodogram(record.diff_series(), record.bin_dt, band_lo_hz,
                             band_hi_hz);
  const auto& p = res.spectrum.power;
  const size_t peak =
      static_cast<size_t>(std::max_element(p.begin(), p.end()) - p.begin());

  const Real floor = median(p);
  res.peak_to_median = floor > 0.0 ? p[peak] / floor : 0.0;
  if (res.peak_to_median < kLockThreshold) {
    res.locked = false;
    return res;
  }

  const Real df = res.spectrum.freq_hz.size() > 1
                      ? res.spectrum.freq_hz[1] - res.spectrum.freq_hz[0]
                      : 0.0;
  Real nu = res.spectrum.freq_hz[peak];
  Real half_width = 0.5 * df;
  if (peak > 0 && peak + 1 < p.size() && p[peak] > 0.0) {
    // log-power parabola through the peak and its neighbours
    const Real eps = 1e-300;
    const Real lm = std::log(p[peak - 1] + eps);
    const Real l0 = std::log(p[peak] + eps);
    const Real lp = std::log(p[peak + 1] + eps);
    const Real denom = lm - 2.0 * l0 + lp;
    if (denom < 0.0) {
      const Real shift = 0.5 * (lm - lp) / denom;
      nu += std::clamp(shift, -0.5, 0.5) * df;
      // half width where the fitted parabola drops by a factor of 2
      half_width = df * std::sqrt(2.0 * std::log(2.0) / -denom);
    }
  }

  res.locked = true;
  res.nu_hz = nu;
  res.confidence_hz = half_width;
  res.b_tesla = nu / (std::abs(lande_g) * k.mu_b_over_h_hz_per_tesla());
  return res;
}

}  // namespace spincond
