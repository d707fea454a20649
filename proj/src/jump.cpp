#include "spincond/jump.hpp"

#include <cmath>

#include "spincond/observables.hpp"
#include "spincond/parallel.hpp"

namespace spincond {

void validate(const JumpParams& p) {
  if (p.flux < 0.0 || p.delta_t <= 0.0)
    throw std::invalid_argument("JumpParams: need flux >= 0 and delta_t > 0");
  if (p.flux * p.delta_t > 0.05)
    throw std::invalid_argument(
        "JumpParams: f*delta_t = " + std::to_string(p.flux * p.delta_t) +
        " exceeds 0.05; shrink the step");
}

std::pair<SectorOperator, SectorOperator> jump_operators(const CouplingVector& g,
                                                         Real flux, Real delta_t,
                                                         int n) {
  SectorBasis basis(n);
  const int d = basis.dim();
  const Real amp = 0.5 * std::sqrt(flux * delta_t);
  SectorOperator jp{n, MatXc::Zero(d, d)}, jm{n, MatXc::Zero(d, d)};
  for (int i = 0; i < d; ++i) {
    const Complex phase = std::exp(Complex(0.0, -g.dot(basis.at(i))));
    jp.mat(i, i) = amp * (1.0 + Complex(0.0, 1.0) * phase);
    jm.mat(i, i) = amp * (1.0 - Complex(0.0, 1.0) * phase);
  }
  return {jp, jm};
}

SectorOperator zeeman_unitary(const Vec3& b_tesla, Real lande_g, Real dt, int n,
                              const Constants& k) {
  const Vec3 omega =
      larmor_omega_rad_s(FieldParams{b_tesla, lande_g}, k);  // rad/s
  SectorOperator u;
  u.n = n;
  MatXc h = omega(0) * build_operator(OperatorKind::Fx, n).mat +
            omega(1) * build_operator(OperatorKind::Fy, n).mat +
            omega(2) * build_operator(OperatorKind::Fz, n).mat;
  Eigen::SelfAdjointEigenSolver<MatXc> solver(h);
  const VecX lambda = solver.eigenvalues();
  VecXc phases(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    phases(i) = std::exp(Complex(0.0, -lambda(i) * dt));
  u.mat = solver.eigenvectors() * phases.asDiagonal() *
          solver.eigenvectors().adjoint();
  return u;
}

JumpStepContext::JumpStepContext(const JumpParams& p, int n) {
  validate(p);
  fdt_ = p.flux * p.delta_t;
  SectorBasis basis(n);
  sin_phase_.resize(basis.dim());
  phase_factor_.resize(basis.dim());
  for (int i = 0; i < basis.dim(); ++i) {
    const Real x = p.g.dot(basis.at(i));
    sin_phase_(i) = std::sin(x);
    phase_factor_(i) = std::exp(Complex(0.0, -x));
  }
  u_zeeman_ =
      zeeman_unitary(p.field.b_tesla, p.field.lande_g, p.delta_t, n, p.constants).mat;
}

Real JumpStepContext::click_probability_plus(const DensityMatrix& rho) const {
  const Real mean_sin = (rho.rho.diagonal().real().array() * sin_phase_.array()).sum();
  return 0.5 * fdt_ * (1.0 + mean_sin);
}

Real JumpStepContext::click_probability_minus(const DensityMatrix& rho) const {
  const Real mean_sin = (rho.rho.diagonal().real().array() * sin_phase_.array()).sum();
  return 0.5 * fdt_ * (1.0 - mean_sin);
}

ClickEvent JumpStepContext::step(DensityMatrix& rho, Rng& rng) const {
  const Real mean_sin = (rho.rho.diagonal().real().array() * sin_phase_.array()).sum();
  const Real p_plus = 0.5 * fdt_ * (1.0 + mean_sin);
  const Real p_minus = 0.5 * fdt_ * (1.0 - mean_sin);
  if (p_plus < 0.0 || p_minus < 0.0 || p_plus + p_minus > 1.0)
    throw std::runtime_error("jump step: sampled probabilities outside [0,1]; "
                             "delta_t too large for this coupling");

  const Real u = rng.uniform();
  ClickEvent event = ClickEvent::None;
  if (u < p_plus)
    event = ClickEvent::Plus;
  else if (u < p_plus + p_minus)
    event = ClickEvent::Minus;

  if (event != ClickEvent::None) {
    // rho -> J rho J^dag / tr: J is diagonal, so scale rows and columns.
    // The sqrt(f dt)/2 prefactor cancels against the renormalization.
    const Complex iu(0.0, event == ClickEvent::Plus ? 1.0 : -1.0);
    VecXc j(phase_factor_.size());
    for (Eigen::Index i = 0; i < j.size(); ++i)
      j(i) = 1.0 + iu * phase_factor_(i);
    rho.rho = j.asDiagonal() * rho.rho * j.conjugate().asDiagonal();
  }
  // No-click Kraus operator sqrt(1 - J+^dag J+ - J-^dag J-) = sqrt(1 - f dt) * 1
  // is a scalar: pure renormalization, no backaction.
  rho.rho = u_zeeman_ * rho.rho * u_zeeman_.adjoint();
  rho.renormalize();
  return event;
}

TrajectoryRecord run_jump_trajectory(const JumpRunConfig& cfg) {
  validate(cfg.params);
  const long total_steps = std::lround(cfg.total_time / cfg.params.delta_t);
  if (static_cast<Real>(total_steps) > cfg.step_budget)
    throw std::invalid_argument("run_jump_trajectory: step budget exceeded (" +
                                std::to_string(total_steps) + " steps)");
  if (cfg.sample_stride < 1)
    throw std::invalid_argument("run_jump_trajectory: sample_stride must be >= 1");

  const int n = cfg.initial.n;
  const JumpStepContext ctx(cfg.params, n);
  const SpinObservables obs(n);
  Rng rng(cfg.seed);

  DensityMatrix rho = pure_density(cfg.initial);
  TrajectoryRecord rec;
  rec.seed = cfg.seed;

  long clicks_plus = 0, clicks_minus = 0;
  auto sample = [&](long step_index) {
    const Real t = step_index * cfg.params.delta_t;
    rec.t.push_back(t);
    const Vec3 mu = obs.mean(rho);
    rec.mean.push_back(mu);
    rec.cov.push_back(obs.cov(rho, mu));
    rec.clicks_plus_cum.push_back(static_cast<Real>(clicks_plus));
    rec.clicks_minus_cum.push_back(static_cast<Real>(clicks_minus));
    rec.purity.push_back(rho.purity());
  };

  sample(0);
  for (long s = 1; s <= total_steps; ++s) {
    const ClickEvent event = ctx.step(rho, rng);
    if (event == ClickEvent::Plus) {
      ++clicks_plus;
      if (cfg.keep_click_events)
        rec.click_events.push_back({s * cfg.params.delta_t, +1});
    } else if (event == ClickEvent::Minus) {
      ++clicks_minus;
      if (cfg.keep_click_events)
        rec.click_events.push_back({s * cfg.params.delta_t, -1});
    }
    if (s % cfg.sample_stride == 0 || s == total_steps) sample(s);
  }
  return rec;
}

std::vector<TrajectoryRecord> run_jump_ensemble(const JumpRunConfig& cfg,
                                                int trajectories) {
  return parallel_map<TrajectoryRecord>(trajectories, [&](int i) {
    JumpRunConfig c = cfg;
    c.seed = Rng::stream_seed(cfg.seed, static_cast<std::uint64_t>(i));
    c.keep_click_events = false;
    return run_jump_trajectory(c);
  });
}

}  // namespace spincond
