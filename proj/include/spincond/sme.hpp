#pragma once

#include <string>
#include <vector>

#include "spincond/coupling.hpp"
#include "spincond/fock.hpp"
#include "spincond/rng.hpp"
#include "spincond/trajectory.hpp"

namespace spincond {

// Conditional stochastic master equation in the diffusion limit, for the
// exact sector density matrix. With X = G.N and H0 = hbar omega.F the
// normalized Ito form integrated here is
//
//   d rho = -i[omega.F, rho] dt - i (f/2)[X, rho] dt - (f/4)[X,[X,rho]] dt
//           - i (sqrt(f)/2)[X, rho] dV+
//           + (sqrt(f)/2)(X rho + rho X - 2<X> rho) dV-
//
// The double-commutator drift is the Ito partner of the two noise channels
// (f/8 each); with it the unravelling preserves purity and the ensemble
// average reproduces the jump process. Deterministic terms are applied as
// one exact cached unitary per step; the measurement terms are an
// Euler-Maruyama update, elementwise in the occupation basis since X is
// diagonal there.

struct SmeParams {
  Real flux = 0.0;  // photons/s
  CouplingVector g;
  FieldParams field;
  Real dt = 0.0;
  int normalize_every = 1;
  bool include_beta = true;  // full G.N coupling; false: gamma*n + alpha*F_z
  Constants constants;
};

inline constexpr int kDefaultExactCap = 20;

std::vector<std::string> sme_warnings(const SmeParams& p, int n);

class SmeIntegrator {
 public:
  SmeIntegrator(const SmeParams& p, int n);

  // One step with externally supplied Wiener increments (variance dt).
  void step(DensityMatrix& rho, Real dv_plus, Real dv_minus);

  Real coupling_expectation(const DensityMatrix& rho) const {
    return (rho.rho.diagonal().real().array() * x_.array()).sum();
  }
  const VecX& coupling_diagonal() const { return x_; }
  Real dt() const { return p_.dt; }
  Real flux() const { return p_.flux; }

 private:
  SmeParams p_;
  VecX x_;
  MatX dx_, dx2_, sx_;  // x_i - x_j, (x_i - x_j)^2, x_i + x_j
  MatXc u_det_;         // exp(-i (omega.F + (f/2)X) dt)
  long steps_since_norm_ = 0;
};

// Convenience single-step form; builds the cached context on every call.
void sme_step(DensityMatrix& rho, const SmeParams& p, Real dv_plus, Real dv_minus);

// Photocurrent from a recorded <X> path and the increments that drove it:
// per step dC+- = (f/2)(1 +- <X>) dt + sqrt((f/2)(1 +- <X>)) dW+-,
// accumulated into bins. Negative diffusion-limit port rates are clamped.
PhotocurrentRecord simulate_photocurrent(const std::vector<Real>& x_path,
                                         const std::vector<Real>& dw_plus,
                                         const std::vector<Real>& dw_minus,
                                         Real flux, Real dt, Real bin_dt);

struct SmeRunConfig {
  SmeParams params;
  FockState initial;
  Real total_time = 0.0;
  int sample_stride = 100;
  Real bin_dt = 0.0;  // photocurrent bin; 0 = sample_stride * dt
  std::uint64_t seed = 0;
  int exact_n_cap = kDefaultExactCap;
};

struct SmeRun {
  TrajectoryRecord trajectory;
  PhotocurrentRecord photocurrent;
};

SmeRun run_sme(const SmeRunConfig& cfg);
std::vector<SmeRun> run_sme_ensemble(const SmeRunConfig& cfg, int trajectories);

// Ensemble-averaged (unconditional) reference: noise terms drop, leaving
//   drho/dt = -i[omega.F, rho] - i(f/2)[X, rho] - (f/4)[X,[X,rho]],
// integrated with classical RK4.
struct UnconditionalRunConfig {
  SmeParams params;
  FockState initial;
  Real total_time = 0.0;
  int sample_stride = 100;
  int exact_n_cap = kDefaultExactCap;
  bool keep_states = false;
};

struct UnconditionalRun {
  std::vector<Real> t;
  std::vector<Vec3> mean;
  std::vector<Eigen::Matrix<Real, kCovEntries, 1>> cov;
  std::vector<Real> purity;
  std::vector<DensityMatrix> states;  // only when keep_states
};

UnconditionalRun run_unconditional(const UnconditionalRunConfig& cfg);

}  // namespace spincond
