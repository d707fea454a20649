#include "spincond/sme.hpp"

#include <cmath>

#include "spincond/observables.hpp"
#include "spincond/parallel.hpp"

namespace spincond {

std::vector<std::string> sme_warnings(const SmeParams& p, int n) {
  std::vector<std::string> w;
  const Real reach = n * p.g.max_abs();
  if (p.dt * p.flux * reach * reach > 1e-2)
    w.push_back("sme: dt*f*(n*max|G|)^2 = " +
                std::to_string(p.dt * p.flux * reach * reach) +
                " > 1e-2; diffusion step may be inaccurate");
  if (reach > 0.1)
    w.push_back("coupling: n*max|G| = " + std::to_string(reach) +
                " > 0.1; linearized signal forms are outside their domain");
  return w;
}

SmeIntegrator::SmeIntegrator(const SmeParams& p, int n) : p_(p) {
  if (p.dt <= 0.0) throw std::invalid_argument("SmeIntegrator: dt must be > 0");
  if (p.normalize_every < 1)
    throw std::invalid_argument("SmeIntegrator: normalize_every must be >= 1");
  SectorBasis basis(n);
  if (p.include_beta)
    x_ = coupling_phase_diagonal(p.g, basis);
  else
    x_ = linearized_phase_diagonal(affine_decomposition(p.g), basis);

  const int d = basis.dim();
  dx_ = x_.replicate(1, d) - x_.transpose().replicate(d, 1);
  dx2_ = dx_.cwiseProduct(dx_);
  sx_ = x_.replicate(1, d) + x_.transpose().replicate(d, 1);

  const Vec3 omega = larmor_omega_rad_s(p.field, p.constants);
  MatXc h = omega(0) * build_operator(OperatorKind::Fx, n).mat +
            omega(1) * build_operator(OperatorKind::Fy, n).mat +
            omega(2) * build_operator(OperatorKind::Fz, n).mat;
  h.diagonal() += (0.5 * p.flux) * x_.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<MatXc> solver(h);
  VecXc phases(d);
  for (int i = 0; i < d; ++i)
    phases(i) = std::exp(Complex(0.0, -solver.eigenvalues()(i) * p.dt));
  u_det_ = solver.eigenvectors() * phases.asDiagonal() *
           solver.eigenvectors().adjoint();
}

void SmeIntegrator::step(DensityMatrix& rho, Real dv_plus, Real dv_minus) {
  const Real xbar = coupling_expectation(rho);
  const Real sf = std::sqrt(p_.flux);
  // Elementwise multiplier of the measurement update:
  // 1 - (f/4) dx^2 dt - i (sqrt(f)/2) dx dV+ + (sqrt(f)/2)(sx - 2<X>) dVm
  MatXc m = ((-0.25 * p_.flux * p_.dt) * dx2_ +
             (0.5 * sf * dv_minus) * (sx_.array() - 2.0 * xbar).matrix())
                .cast<Complex>();
  m.array() += Complex(1.0, 0.0);
  m -= Complex(0.0, 0.5 * sf * dv_plus) * dx_.cast<Complex>();

  rho.rho = (u_det_ * rho.rho.cwiseProduct(m) * u_det_.adjoint()).eval();
  rho.hermitize();

  if (++steps_since_norm_ >= p_.normalize_every) {
    const Real tr = rho.trace_real();
    if (std::abs(tr - 1.0) > 1e-6)
      throw std::runtime_error(
          "sme: trace drifted to " + std::to_string(tr) +
          " between renormalizations; reduce dt or normalize_every");
    rho.rho /= tr;
    steps_since_norm_ = 0;
  }
}

void sme_step(DensityMatrix& rho, const SmeParams& p, Real dv_plus, Real dv_minus) {
  SmeIntegrator integrator(p, rho.n);
  integrator.step(rho, dv_plus, dv_minus);
}

PhotocurrentRecord simulate_photocurrent(const std::vector<Real>& x_path,
                                         const std::vector<Real>& dw_plus,
                                         const std::vector<Real>& dw_minus,
                                         Real flux, Real dt, Real bin_dt) {
  if (x_path.size() != dw_plus.size() || x_path.size() != dw_minus.size())
    throw std::invalid_argument(
        "simulate_photocurrent: noise path length does not match the <X> path");
  if (bin_dt < dt) bin_dt = dt;
  const long steps_per_bin = std::max<long>(1, std::lround(bin_dt / dt));

  PhotocurrentRecord rec;
  rec.bin_dt = steps_per_bin * dt;
  Real acc_p = 0.0, acc_m = 0.0;
  for (size_t s = 0; s < x_path.size(); ++s) {
    const Real rate_p = 0.5 * flux * (1.0 + x_path[s]);
    const Real rate_m = 0.5 * flux * (1.0 - x_path[s]);
    acc_p += rate_p * dt + std::sqrt(std::max(0.0, rate_p)) * dw_plus[s];
    acc_m += rate_m * dt + std::sqrt(std::max(0.0, rate_m)) * dw_minus[s];
    if ((s + 1) % static_cast<size_t>(steps_per_bin) == 0) {
      rec.t.push_back((s + 1 - steps_per_bin) * dt);
      rec.dc_plus.push_back(acc_p);
      rec.dc_minus.push_back(acc_m);
      acc_p = acc_m = 0.0;
    }
  }
  return rec;
}

SmeRun run_sme(const SmeRunConfig& cfg) {
  const int n = cfg.initial.n;
  if (n > cfg.exact_n_cap)
    throw std::invalid_argument(
        "run_sme: sector n = " + std::to_string(n) + " exceeds the exact cap " +
        std::to_string(cfg.exact_n_cap) + "; use the gaussian moments engine");
  if (cfg.sample_stride < 1)
    throw std::invalid_argument("run_sme: sample_stride must be >= 1");

  SmeIntegrator integrator(cfg.params, n);
  const SpinObservables obs(n);
  Rng rng(cfg.seed);

  const long total_steps = std::lround(cfg.total_time / cfg.params.dt);
  const Real dt = cfg.params.dt;
  const Real sqdt = std::sqrt(dt);

  DensityMatrix rho = pure_density(cfg.initial);

  SmeRun out;
  out.trajectory.seed = cfg.seed;
  std::vector<Real> x_path(static_cast<size_t>(total_steps));
  std::vector<Real> dwp(static_cast<size_t>(total_steps)),
      dwm(static_cast<size_t>(total_steps));

  Real clicks_p = 0.0, clicks_m = 0.0;
  auto sample = [&](long s) {
    out.trajectory.t.push_back(s * dt);
    const Vec3 mu = obs.mean(rho);
    out.trajectory.mean.push_back(mu);
    out.trajectory.cov.push_back(obs.cov(rho, mu));
    out.trajectory.clicks_plus_cum.push_back(clicks_p);
    out.trajectory.clicks_minus_cum.push_back(clicks_m);
    out.trajectory.purity.push_back(rho.purity());
  };

  sample(0);
  for (long s = 0; s < total_steps; ++s) {
    const Real xbar = integrator.coupling_expectation(rho);
    const Real dv_plus = rng.normal() * sqdt;
    const Real dv_minus = rng.normal() * sqdt;
    integrator.step(rho, dv_plus, dv_minus);

    // photocurrent from the integrator's own increments
    const Real r2 = 1.0 / std::sqrt(2.0);
    const Real dw_plus = (dv_plus + dv_minus) * r2;
    const Real dw_minus = (dv_plus - dv_minus) * r2;
    x_path[static_cast<size_t>(s)] = xbar;
    dwp[static_cast<size_t>(s)] = dw_plus;
    dwm[static_cast<size_t>(s)] = dw_minus;
    const Real rate_p = 0.5 * cfg.params.flux * (1.0 + xbar);
    const Real rate_m = 0.5 * cfg.params.flux * (1.0 - xbar);
    clicks_p += rate_p * dt + std::sqrt(std::max(0.0, rate_p)) * dw_plus;
    clicks_m += rate_m * dt + std::sqrt(std::max(0.0, rate_m)) * dw_minus;

    if ((s + 1) % cfg.sample_stride == 0 || s + 1 == total_steps) sample(s + 1);
  }

  const Real bin = cfg.bin_dt > 0.0 ? cfg.bin_dt : cfg.sample_stride * dt;
  out.photocurrent =
      simulate_photocurrent(x_path, dwp, dwm, cfg.params.flux, dt, bin);
  return out;
}

std::vector<SmeRun> run_sme_ensemble(const SmeRunConfig& cfg, int trajectories) {
  return parallel_map<SmeRun>(trajectories, [&](int i) {
    SmeRunConfig c = cfg;
    c.seed = Rng::stream_seed(cfg.seed, static_cast<std::uint64_t>(i));
    return run_sme(c);
  });
}

namespace {
MatXc lindblad_rhs(const MatXc& rho, const MatXc& h, const MatX& dx,
                   const MatX& dx2, Real flux) {
  const Complex mi(0.0, -1.0);
  MatXc out = mi * (h * rho - rho * h);
  out += mi * (0.5 * flux) * dx.cast<Complex>().cwiseProduct(rho);
  out -= (0.25 * flux) * dx2.cast<Complex>().cwiseProduct(rho);
  return out;
}
}  // namespace

UnconditionalRun run_unconditional(const UnconditionalRunConfig& cfg) {
  const int n = cfg.initial.n;
  if (n > cfg.exact_n_cap)
    throw std::invalid_argument(
        "run_unconditional: sector n exceeds the exact cap; use the gaussian "
        "moments engine");

  SectorBasis basis(n);
  VecX x;
  if (cfg.params.include_beta)
    x = coupling_phase_diagonal(cfg.params.g, basis);
  else
    x = linearized_phase_diagonal(affine_decomposition(cfg.params.g), basis);
  const int d = basis.dim();
  const MatX dx = x.replicate(1, d) - x.transpose().replicate(d, 1);
  const MatX dx2 = dx.cwiseProduct(dx);

  const Vec3 omega = larmor_omega_rad_s(cfg.params.field, cfg.params.constants);
  const MatXc h = omega(0) * build_operator(OperatorKind::Fx, n).mat +
                  omega(1) * build_operator(OperatorKind::Fy, n).mat +
                  omega(2) * build_operator(OperatorKind::Fz, n).mat;

  const SpinObservables obs(n);
  DensityMatrix rho = pure_density(cfg.initial);
  const Real dt = cfg.params.dt;
  const long total_steps = std::lround(cfg.total_time / dt);

  UnconditionalRun out;
  auto sample = [&](long s) {
    out.t.push_back(s * dt);
    const Vec3 mu = obs.mean(rho);
    out.mean.push_back(mu);
    out.cov.push_back(obs.cov(rho, mu));
    out.purity.push_back(rho.purity());
    if (cfg.keep_states) out.states.push_back(rho);
  };

  sample(0);
  for (long s = 0; s < total_steps; ++s) {
    const MatXc k1 = lindblad_rhs(rho.rho, h, dx, dx2, cfg.params.flux);
    const MatXc k2 =
        lindblad_rhs(rho.rho + 0.5 * dt * k1, h, dx, dx2, cfg.params.flux);
    const MatXc k3 =
        lindblad_rhs(rho.rho + 0.5 * dt * k2, h, dx, dx2, cfg.params.flux);
    const MatXc k4 = lindblad_rhs(rho.rho + dt * k3, h, dx, dx2, cfg.params.flux);
    rho.rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho.hermitize();
    rho.renormalize();
    if ((s + 1) % cfg.sample_stride == 0 || s + 1 == total_steps) sample(s + 1);
  }
  return out;
}

}  // namespace spincond
