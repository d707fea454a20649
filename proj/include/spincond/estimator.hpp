#pragma once

#include <vector>

#include "spincond/coupling.hpp"
#include "spincond/trajectory.hpp"

namespace spincond {

// Larmor-frequency estimation from the photocurrent difference record:
// Hann-windowed periodogram on the rfft grid restricted to the search band,
// peak refined by log-power parabolic interpolation. Parameter-free and
// robust at the ~70 cycles per record of the experiments here.

struct Periodogram {
  std::vector<Real> freq_hz;
  std::vector<Real> power;
};

// Direct DFT over the band [f_lo, f_hi]; grid spacing 1/(N dt).
Periodogram periodogram(const std::vector<Real>& samples, Real sample_dt,
                        Real f_lo, Real f_hi);

struct EstimationResult {
  bool locked = false;
  Real nu_hz = 0.0;          // refined peak frequency
  Real b_tesla = 0.0;        // h nu / (|g_L| mu_B)
  Real confidence_hz = 0.0;  // half width from the peak curvature
  Real peak_to_median = 0.0; // lock statistic
  Periodogram spectrum;
};

// Requires the record to span at least 10 cycles of the band center.
// A peak below the noise-floor threshold yields locked = false.
EstimationResult estimate_larmor(const PhotocurrentRecord& record, Real band_lo_hz,
                                 Real band_hi_hz, Real lande_g,
                                 const Constants& k = {});

}  // namespace spincond
