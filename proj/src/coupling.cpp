#include "spincond/coupling.hpp"

#include <cmath>

namespace spincond {

Real detuning_ratio(Real detuning2_hz, const Constants& k) {
  const Real detuning1_hz = detuning2_hz + k.hyperfine_split_hz;
  if (detuning1_hz == 0.0)
    throw std::invalid_argument("detuning_ratio: Delta_1 = 0");
  return detuning2_hz / detuning1_hz;
}

CouplingVector coupling_vector(const OpticalParams& p, const Constants& k) {
  const bool has_rabi = p.rabi_rad_s >= 0.0;
  const bool has_intensity = p.intensity_ratio >= 0.0;
  if (has_rabi == has_intensity)
    throw std::invalid_argument(
        "coupling_vector: supply exactly one of Rabi frequency or intensity ratio");
  if (p.detuning2_hz == 0.0)
    throw std::invalid_argument("coupling_vector: Delta_2 = 0");

  Real omega_sq = 0.0;
  if (has_rabi) {
    omega_sq = p.rabi_rad_s * p.rabi_rad_s;
  } else {
    // Omega^2 = (Gamma^2 / 2) (I / I_sat), Gamma angular
    const Real gamma = 2.0 * M_PI * k.natural_linewidth_hz;
    omega_sq = 0.5 * gamma * gamma * p.intensity_ratio;
  }
  const Real delta = detuning_ratio(p.detuning2_hz, k);
  const Real detuning2_rad = 2.0 * M_PI * p.detuning2_hz;
  const Real scale = p.interaction_time_s * omega_sq / (48.0 * detuning2_rad);
  return CouplingVector{6.0 * scale, (3.0 + delta) * scale, (1.0 + delta) * scale};
}

CouplingVector qnd_coupling(Real g) { return CouplingVector{g, 0.0, -g}; }

AffineCoupling affine_decomposition(const CouplingVector& g) {
  AffineCoupling a;
  a.gamma = g.zero;
  a.alpha = 0.5 * (g.plus - g.minus);
  a.beta = 0.5 * (g.plus - 2.0 * g.zero + g.minus);
  return a;
}

Real measurement_strength(const CouplingVector& g, Real flux_per_s, Real nu_larmor_hz) {
  if (nu_larmor_hz <= 0.0)
    throw std::invalid_argument("measurement_strength: nu_L must be > 0");
  return affine_decomposition(g).alpha * flux_per_s / nu_larmor_hz;
}

Real larmor_frequency_hz(const FieldParams& field, const Constants& k) {
  return std::abs(field.lande_g) * k.mu_b_over_h_hz_per_tesla() * field.b_tesla.norm();
}

Vec3 larmor_omega_rad_s(const FieldParams& field, const Constants& k) {
  return field.lande_g * k.mu_b_over_hbar_rad_per_tesla() * field.b_tesla;
}

Real flux_from_intensity(Real intensity_ratio, Real beam_waist_m, Real wavelength_m,
                         const Constants& k) {
  if (intensity_ratio <= 0.0 || beam_waist_m <= 0.0 || wavelength_m <= 0.0)
    throw std::invalid_argument("flux_from_intensity: inputs must be positive");
  const Real intensity = intensity_ratio * k.i_sat_w_m2;
  const Real area = M_PI * beam_waist_m * beam_waist_m;
  const Real photon_energy = k.planck_j_s * k.light_speed_m_s / wavelength_m;
  return intensity * area / photon_energy;
}

VecX coupling_phase_diagonal(const CouplingVector& g, const SectorBasis& basis) {
  VecX x(basis.dim());
  for (int i = 0; i < basis.dim(); ++i) x(i) = g.dot(basis.at(i));
  return x;
}

VecX linearized_phase_diagonal(const AffineCoupling& a, const SectorBasis& basis) {
  VecX x(basis.dim());
  for (int i = 0; i < basis.dim(); ++i) {
    const Occupation& j = basis.at(i);
    x(i) = a.gamma * basis.n() + a.alpha * (j.plus - j.minus);
  }
  return x;
}

}  // namespace spincond
