#pragma once

#include "spincond/fock.hpp"
#include "spincond/types.hpp"

namespace spincond {

// Frozen physical constants for the 87Rb D1 probe model. Values are
// overridable through the [constants] config section; sources:
//   mu_B/h          CODATA Bohr magneton over Planck constant, per gauss
//   hyperfine split F'=1 -> F'=2 interval of the 5P_1/2 manifold
//   d1 wavelength   87Rb D1 line
//   I_sat           D1 circular-polarization saturation intensity
//   linewidth       D1 natural linewidth Gamma / 2pi
struct Constants {
  Real mu_b_over_h_hz_per_g = 1.399624e6;
  Real hyperfine_split_hz = 814.5e6;
  Real d1_wavelength_m = 794.979e-9;
  Real i_sat_w_m2 = 14.9;               // 1.49 mW/cm^2
  Real natural_linewidth_hz = 5.75e6;   // Gamma / 2pi
  Real planck_j_s = 6.62607015e-34;
  Real light_speed_m_s = 299792458.0;

  Real mu_b_over_h_hz_per_tesla() const { return mu_b_over_h_hz_per_g * 1e4; }
  Real mu_b_over_hbar_rad_per_tesla() const {
    return 2.0 * M_PI * mu_b_over_h_hz_per_tesla();
  }
};

// Dimensionless per-photon phase shifts (G_+, G_0, G_-), radians per photon.
struct CouplingVector {
  Real plus = 0.0;
  Real zero = 0.0;
  Real minus = 0.0;

  Real max_abs() const {
    return std::max({std::abs(plus), std::abs(zero), std::abs(minus)});
  }
  Real dot(const Occupation& j) const {
    return plus * j.plus + zero * j.zero + minus * j.minus;
  }
};

// Exact decomposition G.N = gamma(N_+ + N_0 + N_-) + alpha F_z + beta(N_+ + N_-).
struct AffineCoupling {
  Real gamma = 0.0;  // scalar offset per atom
  Real alpha = 0.0;  // F_z coefficient
  Real beta = 0.0;   // quadratic (N_+ + N_-) coefficient
};

struct OpticalParams {
  // exactly one of rabi_rad_s / intensity_ratio is the primary input
  Real rabi_rad_s = -1.0;       // single-photon Rabi frequency Omega (rad/s)
  Real intensity_ratio = -1.0;  // I / I_sat
  Real detuning2_hz = 0.0;      // F=1 -> F'=2 detuning (signed, ordinary Hz)
  Real interaction_time_s = 0.0;
  Real photon_flux_s = 0.0;
};

struct FieldParams {
  Vec3 b_tesla = Vec3::Zero();
  Real lande_g = -0.5;  // 87Rb F=1; sign configurable, magnitude used for nu_L
};

// delta = Delta_2 / (Delta_2 + hyperfine split)
Real detuning_ratio(Real detuning2_hz, const Constants& k = {});

// g = (Omega^2 / 48 Delta_2) (6, 3+delta, 1+delta) in rad/s per photon,
// G = tau * g. Omega and Delta_2 enter as angular frequencies.
CouplingVector coupling_vector(const OpticalParams& p, const Constants& k = {});

// (G, 0, -G), so that G.N = G F_z.
CouplingVector qnd_coupling(Real g);

AffineCoupling affine_decomposition(const CouplingVector& g);

// Dimensionless measurement-strength ratio alpha * f / nu_L.
Real measurement_strength(const CouplingVector& g, Real flux_per_s, Real nu_larmor_hz);

Real larmor_frequency_hz(const FieldParams& field, const Constants& k = {});

// Angular precession vector omega = g_L mu_B B / hbar (rad/s).
Vec3 larmor_omega_rad_s(const FieldParams& field, const Constants& k = {});

// Photon flux of a beam of area pi w^2 at the given intensity:
// f = (I/I_sat) I_sat pi w^2 lambda / (h c).
Real flux_from_intensity(Real intensity_ratio, Real beam_waist_m, Real wavelength_m,
                         const Constants& k = {});

// Diagonal of G.N in the occupation basis: x_k = G . j_k.
VecX coupling_phase_diagonal(const CouplingVector& g, const SectorBasis& basis);

// Diagonal of the linearized coupling gamma*n + alpha*F_z.
VecX linearized_phase_diagonal(const AffineCoupling& a, const SectorBasis& basis);

}  // namespace spincond
