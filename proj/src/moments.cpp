#include "spincond/moments.hpp"

#include <cmath>

#include "spincond/parallel.hpp"
#include "spincond/sme.hpp"

namespace spincond {

namespace {

Mat3 rotation(const Vec3& axis_angle) {
  const Real angle = axis_angle.norm();
  if (angle == 0.0) return Mat3::Identity();
  return Eigen::AngleAxisd(angle, axis_angle / angle).toRotationMatrix();
}

// generator of rotations about z: Z v = z x v
const Mat3 kZGen = (Mat3() << 0, -1, 0, 1, 0, 0, 0, 0, 0).finished();

}  // namespace

MomentState coherent_state_moments(Real n_atoms, const Vec3& axis) {
  if (std::abs(axis.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("coherent_state_moments: axis must be a unit vector");
  MomentState s;
  s.mean = n_atoms * axis;
  s.cov = 0.5 * n_atoms * (Mat3::Identity() - axis * axis.transpose());
  return s;
}

Real qnd_variance_closed_form(Real t, Real v0, Real flux, Real g) {
  if (v0 <= 0.0)
    throw std::invalid_argument("qnd_variance_closed_form: v0 must be > 0");
  return 1.0 / (1.0 / v0 + flux * g * g * t);
}

Real psd_floor(const Mat3& cov) {
  Eigen::SelfAdjointEigenSolver<Mat3> solver(cov, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Real moment_drift_diffusion(MomentState& state, const MomentParams& p,
                            Real dv_plus, Real dv_minus) {
  const Real a = p.alpha;
  const Real f = p.flux;
  const Real dt = p.dt;
  const Real fa2 = f * a * a;

  Vec3& mu = state.mean;
  Mat3& v = state.cov;

  // 1. conditioning on the record: exact finite-step Kalman update of the
  //    z channel with added precision lambda = f a^2 dt
  const Real lambda = fa2 * dt;
  const Real denom = 1.0 + lambda * v(2, 2);
  const Real xi_minus = dv_minus / std::sqrt(dt);  // unit normal
  const Vec3 vz = v.col(2);
  mu += vz * (std::sqrt(lambda) * xi_minus / std::sqrt(denom));
  v -= (lambda / denom) * (vz * vz.transpose());

  // 2. photon shot noise: exact rotation about z by (sqrt(f) a / 2) dV+
  const Real dphi = 0.5 * std::sqrt(f) * a * dv_plus;
  const Mat3 rz = rotation(Vec3(0, 0, dphi));
  mu = rz * mu;
  v = rz * v * rz.transpose();

  // 3. residual backaction drift (see header)
  const Real c2 = 0.25 * fa2;
  mu.head<2>() *= 1.0 - 0.5 * c2 * dt;
  const Vec3 zmu = kZGen * mu;
  const Mat3 z2v = kZGen * kZGen * v;
  v += (c2 * dt) * (kZGen * v * kZGen.transpose() +
                    0.5 * (z2v + z2v.transpose()) + zmu * zmu.transpose());

  // 4. exact Larmor rotation, light shift included unless cancelled
  Vec3 omega_eff = p.omega_rad_s;
  if (!p.light_shift_cancelled) omega_eff(2) += 0.5 * f * a;
  const Mat3 r = rotation(omega_eff * dt);
  mu = r * mu;
  v = r * v * r.transpose();
  v = (0.5 * (v + v.transpose())).eval();

  // record noise consumed by the measurement channel
  return dv_minus * std::sqrt(denom);
}

MomentRun run_moments(const MomentRunConfig& cfg) {
  if (cfg.sample_stride < 1)
    throw std::invalid_argument("run_moments: sample_stride must be >= 1");
  const Real dt = cfg.params.dt;
  if (dt <= 0.0) throw std::invalid_argument("run_moments: dt must be > 0");

  MomentState state = cfg.initial;
  Rng rng(cfg.seed);
  const long total_steps = std::lround(cfg.total_time / dt);
  const Real sqdt = std::sqrt(dt);

  MomentRun out;
  out.trajectory.seed = cfg.seed;
  std::vector<Real> x_path(static_cast<size_t>(total_steps));
  std::vector<Real> dwp(static_cast<size_t>(total_steps)),
      dwm(static_cast<size_t>(total_steps));

  Real clicks_p = 0.0, clicks_m = 0.0;
  auto sample = [&](long s) {
    out.trajectory.t.push_back(s * dt);
    out.trajectory.mean.push_back(state.mean);
    out.trajectory.cov.push_back(cov_to_entries(state.cov));
    out.trajectory.clicks_plus_cum.push_back(clicks_p);
    out.trajectory.clicks_minus_cum.push_back(clicks_m);
    const Real floor = psd_floor(state.cov);
    if (floor < -cfg.psd_tolerance)
      throw std::runtime_error(
          "run_moments: covariance lost positive semidefiniteness (min "
          "eigenvalue " +
          std::to_string(floor) + "); reduce dt");
  };

  const Real r2 = 1.0 / std::sqrt(2.0);
  sample(0);
  for (long s = 0; s < total_steps; ++s) {
    const Real xbar =
        cfg.params.gamma * cfg.params.n_atoms + cfg.params.alpha * state.mean(2);
    const Real dv_plus = rng.normal() * sqdt;
    const Real dv_minus = rng.normal() * sqdt;
    const Real dv_minus_record =
        moment_drift_diffusion(state, cfg.params, dv_plus, dv_minus);

    const Real dw_plus = (dv_plus + dv_minus_record) * r2;
    const Real dw_minus = (dv_plus - dv_minus_record) * r2;
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

std::vector<MomentRun> run_moments_ensemble(const MomentRunConfig& cfg,
                                            int trajectories) {
  return parallel_map<MomentRun>(trajectories, [&](int i) {
    MomentRunConfig c = cfg;
    c.seed = Rng::stream_seed(cfg.seed, static_cast<std::uint64_t>(i));
    return run_moments(c);
  });
}

}  // namespace spincond
