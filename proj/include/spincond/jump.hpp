#pragma once

#include "spincond/coupling.hpp"
#include "spincond/fock.hpp"
#include "spincond/rng.hpp"
#include "spincond/trajectory.hpp"

namespace spincond {

// Discrete-time quantum-trajectory engine: per-step click sampling with the
// two detector jump operators, interleaved with the exact Zeeman unitary.
// Serves as ground truth for the diffusion-limit integrator.

struct JumpParams {
  Real flux = 0.0;     // photons/s
  Real delta_t = 0.0;  // step length (s)
  CouplingVector g;
  FieldParams field;
  Constants constants;
};

// Enforces f*dt <= 0.05 so that two-click steps stay below (f dt)^2/2.
void validate(const JumpParams& p);

// J_+- = (sqrt(f dt)/2)(1 +- i e^{-i G.N}); diagonal in the occupation basis.
std::pair<SectorOperator, SectorOperator> jump_operators(const CouplingVector& g,
                                                         Real flux, Real delta_t, int n);

// U(dt) = exp(-i g_L mu_B B.F dt / hbar), computed by exact eigendecomposition.
SectorOperator zeeman_unitary(const Vec3& b_tesla, Real lande_g, Real dt, int n,
                              const Constants& k = {});

enum class ClickEvent { None, Plus, Minus };

// Per-step context precomputed from JumpParams for one sector.
class JumpStepContext {
 public:
  JumpStepContext(const JumpParams& p, int n);

  // Samples {click+, click-, none}, applies the matching Kraus operator and
  // the Zeeman unitary, renormalizes the trace.
  ClickEvent step(DensityMatrix& rho, Rng& rng) const;

  Real click_probability_plus(const DensityMatrix& rho) const;
  Real click_probability_minus(const DensityMatrix& rho) const;
  Real fdt() const { return fdt_; }

 private:
  Real fdt_ = 0.0;
  VecX sin_phase_;      // sin(G.j_k)
  VecXc phase_factor_;  // e^{-i G.j_k}
  MatXc u_zeeman_;
};

struct JumpRunConfig {
  JumpParams params;
  FockState initial;
  Real total_time = 0.0;
  int sample_stride = 100;       // record observables every this many steps
  std::uint64_t seed = 0;
  Real step_budget = 5e7;
  bool keep_click_events = true;
};

TrajectoryRecord run_jump_trajectory(const JumpRunConfig& cfg);

// Independent trajectories with per-index derived streams; deterministic
// regardless of thread scheduling.
std::vector<TrajectoryRecord> run_jump_ensemble(const JumpRunConfig& cfg,
                                                int trajectories);

}  // namespace spincond
