#include "spincond/fock.hpp"

#include <cmath>

namespace spincond {

namespace {
constexpr int kDenseSectorCap = 60;  // D(60) = 1891, plenty at desk scale

Real log_factorial(int k) { return std::lgamma(static_cast<Real>(k) + 1.0); }
}  // namespace

SectorBasis::SectorBasis(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("SectorBasis: n must be >= 0");
  if (n > kDenseSectorCap)
    throw std::invalid_argument("SectorBasis: n exceeds dense cap " +
                                std::to_string(kDenseSectorCap));
  states_.reserve(static_cast<size_t>(sector_dimension(n)));
  for (int jp = n; jp >= 0; --jp)
    for (int j0 = n - jp; j0 >= 0; --j0)
      states_.push_back(Occupation{jp, j0, n - jp - j0});
}

int SectorBasis::index(const Occupation& occ) const {
  if (occ.plus < 0 || occ.zero < 0 || occ.minus < 0 || occ.total() != n_)
    throw std::invalid_argument("SectorBasis::index: occupation outside sector");
  const int r = n_ - occ.plus;  // states with larger j_+ fill r(r+1)/2 slots
  return r * (r + 1) / 2 + (r - occ.zero);
}

OperatorKind operator_kind_from_string(const std::string& name) {
  if (name == "n_plus") return OperatorKind::NPlus;
  if (name == "n_zero") return OperatorKind::NZero;
  if (name == "n_minus") return OperatorKind::NMinus;
  if (name == "f_x") return OperatorKind::Fx;
  if (name == "f_y") return OperatorKind::Fy;
  if (name == "f_z") return OperatorKind::Fz;
  throw std::invalid_argument("unknown operator kind '" + name +
                              "' (expected n_plus|n_zero|n_minus|f_x|f_y|f_z)");
}

FockState build_product_state(const Spinor& c, int n) {
  const Real nrm = c.norm_squared();
  if (std::abs(nrm - 1.0) > 1e-9)
    throw std::invalid_argument(
        "build_product_state: input triple is not normalized (|c|^2 = " +
        std::to_string(nrm) + ")");
  SectorBasis basis(n);
  FockState state;
  state.n = n;
  state.amplitudes.resize(basis.dim());
  const Real log_nfac = log_factorial(n);
  for (int i = 0; i < basis.dim(); ++i) {
    const Occupation& j = basis.at(i);
    const Real log_multinom = 0.5 * (log_nfac - log_factorial(j.plus) -
                                     log_factorial(j.zero) - log_factorial(j.minus));
    state.amplitudes(i) = std::exp(log_multinom) * std::pow(c.plus, j.plus) *
                          std::pow(c.zero, j.zero) * std::pow(c.minus, j.minus);
  }
  state.amplitudes /= state.amplitudes.norm();
  return state;
}

DensityMatrix pure_density(const FockState& state) {
  DensityMatrix rho;
  rho.n = state.n;
  rho.rho = state.amplitudes * state.amplitudes.adjoint();
  return rho;
}

SectorOperator build_operator(OperatorKind kind, int n) {
  if (n < 1) throw std::invalid_argument("build_operator: n must be >= 1");
  SectorBasis basis(n);
  const int d = basis.dim();
  SectorOperator op;
  op.n = n;
  op.mat = MatXc::Zero(d, d);

  auto diagonal = [&](auto&& value) {
    for (int i = 0; i < d; ++i) op.mat(i, i) = Complex(value(basis.at(i)), 0.0);
  };

  switch (kind) {
    case OperatorKind::NPlus:
      diagonal([](const Occupation& j) { return j.plus; });
      return op;
    case OperatorKind::NZero:
      diagonal([](const Occupation& j) { return j.zero; });
      return op;
    case OperatorKind::NMinus:
      diagonal([](const Occupation& j) { return j.minus; });
      return op;
    case OperatorKind::Fz:
      diagonal([](const Occupation& j) { return j.plus - j.minus; });
      return op;
    default:
      break;
  }

  // Collective raising operator F_+ = sqrt(2)(a_+^dag a_0 + a_0^dag a_-);
  // F_x = (F_+ + F_-)/2, F_y = (F_+ - F_-)/(2i).
  MatXc fplus = MatXc::Zero(d, d);
  const Real r2 = std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    const Occupation& j = basis.at(i);
    if (j.zero > 0) {  // a_+^dag a_0
      const Occupation to{j.plus + 1, j.zero - 1, j.minus};
      fplus(basis.index(to), i) +=
          r2 * std::sqrt(static_cast<Real>((j.plus + 1) * j.zero));
    }
    if (j.minus > 0) {  // a_0^dag a_-
      const Occupation to{j.plus, j.zero + 1, j.minus - 1};
      fplus(basis.index(to), i) +=
          r2 * std::sqrt(static_cast<Real>((j.zero + 1) * j.minus));
    }
  }
  if (kind == OperatorKind::Fx)
    op.mat = 0.5 * (fplus + fplus.adjoint());
  else
    op.mat = Complex(0.0, -0.5) * (fplus - fplus.adjoint());
  return op;
}

Complex expectation(const DensityMatrix& rho, const MatXc& op) {
  if (rho.rho.rows() != op.rows() || rho.rho.cols() != op.cols())
    throw std::invalid_argument("expectation: sector dimension mismatch");
  // tr(rho * op) = sum_ij rho_ij op_ji
  return rho.rho.cwiseProduct(op.transpose()).sum();
}

Complex expectation(const DensityMatrix& rho, const SectorOperator& op) {
  return expectation(rho, op.mat);
}

Real expectation_real(const DensityMatrix& rho, const SectorOperator& op) {
  return expectation(rho, op.mat).real();
}

Real min_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<MatXc> solver(rho.rho, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Real PoissonMixture::mean_n() const {
  Real m = 0.0;
  for (size_t i = 0; i < sector_n.size(); ++i) m += weights[i] * sector_n[i];
  return m;
}

PoissonMixture poisson_mixture(const Spinor& c, Real nbar, int n_lo, int n_hi) {
  if (nbar <= 0.0) throw std::invalid_argument("poisson_mixture: nbar must be > 0");
  if (n_lo < 0) n_lo = 0;
  if (n_hi < n_lo) throw std::invalid_argument("poisson_mixture: empty sector window");

  PoissonMixture mix;
  Real mass = 0.0;
  for (int n = n_lo; n <= n_hi; ++n) {
    const Real logw = -nbar + n * std::log(nbar) - log_factorial(n);
    const Real w = std::exp(logw);
    mass += w;
    mix.sector_n.push_back(n);
    mix.weights.push_back(w);
    mix.states.push_back(build_product_state(c, n));
  }
  if (mass < 1.0 - 1e-6)
    throw std::invalid_argument(
        "poisson_mixture: window covers only " + std::to_string(mass) +
        " of the Poisson mass (need >= 1 - 1e-6)");
  mix.renormalization = mass;
  for (auto& w : mix.weights) w /= mass;
  return mix;
}

}  // namespace spincond
