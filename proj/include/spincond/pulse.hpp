#pragma once

#include "spincond/coupling.hpp"
#include "spincond/fock.hpp"

namespace spincond {

// Photocount statistics of a single coherent pulse after dispersive
// interaction with the condensate and balanced homodyne detection.
// All probability arithmetic is done in log space.

inline constexpr int kExactSectorCap = 40;  // sector-sum limit for exact ops

struct PulseConfig {
  Real mean_photons = 0.0;  // |A_0|^2
  CouplingVector g;
  // counts per port are truncated at cap (inclusive); negative = automatic
  // window mean + 8 sqrt(mean) + 4, which keeps truncated mass below 1e-9
  int count_cap = -1;
};

struct PhotocountPmf {
  MatX table;  // P(C_+ = row, C_- = col)
  Real total = 0.0;

  int cap_plus() const { return static_cast<int>(table.rows()) - 1; }
  int cap_minus() const { return static_cast<int>(table.cols()) - 1; }
  Real prob(int c_plus, int c_minus) const { return table(c_plus, c_minus); }
  Real mean_difference() const;
  Real prob_minus_positive() const;  // P(C_- > 0)
};

PhotocountPmf joint_photocount_pmf(const FockState& state, const PulseConfig& cfg);
PhotocountPmf joint_photocount_pmf(const PoissonMixture& mix, const PulseConfig& cfg);

// <C_+> - <C_-> = |A_0|^2 sum_j p_j sin(G.j), by direct sector sum.
Real mean_count_difference_exact(const FockState& state, Real mean_photons,
                                 const CouplingVector& g);
Real mean_count_difference_exact(const PoissonMixture& mix, Real mean_photons,
                                 const CouplingVector& g);

// Linearized signal |A_0|^2 n G.p and its affine breakdown: the same value
// as mean_photons * n * (gamma + alpha <F_z> + beta <F_z^2>) with the
// single-atom moments <F_z> = p_+ - p_-, <F_z^2> = p_+ + p_-.
struct LinearSignal {
  Real mean_difference = 0.0;
  Real gamma_term = 0.0;      // |A0|^2 n gamma
  Real fz_term = 0.0;         // |A0|^2 n alpha <F_z>
  Real fz2_term = 0.0;        // |A0|^2 n beta <F_z^2>
  Real fz_single_atom = 0.0;  // p_+ - p_-
  Real fz2_single_atom = 0.0; // p_+ + p_-
};

LinearSignal mean_count_difference_linear(const Spinor& c, Real n_atoms,
                                          Real mean_photons, const CouplingVector& g);

}  // namespace spincond
