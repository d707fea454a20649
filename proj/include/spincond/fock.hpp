#pragma once

#include <string>
#include <vector>

#include "spincond/types.hpp"

namespace spincond {

// Exact representation of n spin-1 bosons sharing one spatial mode.
// Basis states are occupation triples (j_+, j_0, j_-) with fixed total n,
// ordered lexicographically DESCENDING in (j_+, j_0). This order is frozen:
// saved records index into it.

struct Occupation {
  int plus = 0;
  int zero = 0;
  int minus = 0;
  int total() const { return plus + zero + minus; }
  bool operator==(const Occupation&) const = default;
};

inline int sector_dimension(int n) {
  if (n < 0) throw std::invalid_argument("sector_dimension: n must be >= 0");
  return (n + 1) * (n + 2) / 2;
}

class SectorBasis {
 public:
  explicit SectorBasis(int n);

  int n() const { return n_; }
  int dim() const { return static_cast<int>(states_.size()); }
  const Occupation& at(int index) const { return states_[static_cast<size_t>(index)]; }
  int index(const Occupation& occ) const;

 private:
  int n_;
  std::vector<Occupation> states_;
};

struct FockState {
  int n = 0;
  VecXc amplitudes;  // length sector_dimension(n), unit norm
};

struct DensityMatrix {
  int n = 0;
  MatXc rho;  // Hermitian, unit trace

  Real trace_real() const { return rho.trace().real(); }
  Real purity() const { return rho.squaredNorm(); }  // tr(rho^2) for Hermitian rho
  void hermitize() { rho = ((rho + rho.adjoint()) * 0.5).eval(); }
  void renormalize() { rho /= rho.trace().real(); }
};

struct SectorOperator {
  int n = 0;
  MatXc mat;
};

enum class OperatorKind { NPlus, NZero, NMinus, Fx, Fy, Fz };

OperatorKind operator_kind_from_string(const std::string& name);

// |Psi_n> built from n copies of the single-atom state c. The amplitude on
// occupation j is sqrt(n!/j!) c^j (multinomial product state). Rejects
// input triples whose norm deviates from 1 by more than 1e-9.
FockState build_product_state(const Spinor& c, int n);

DensityMatrix pure_density(const FockState& state);

SectorOperator build_operator(OperatorKind kind, int n);

// tr(rho * op); requires matching sector dimensions.
Complex expectation(const DensityMatrix& rho, const SectorOperator& op);
Complex expectation(const DensityMatrix& rho, const MatXc& op);

Real expectation_real(const DensityMatrix& rho, const SectorOperator& op);

// Smallest eigenvalue of a Hermitian density matrix (positivity checks).
Real min_eigenvalue(const DensityMatrix& rho);

// Poisson-weighted ensemble of product states over sectors [n_lo, n_hi].
struct PoissonMixture {
  std::vector<int> sector_n;
  std::vector<Real> weights;  // renormalized over the window
  std::vector<FockState> states;
  Real renormalization = 1.0;  // Poisson mass covered by the window

  Real mean_n() const;
};

// Window must cover at least 1 - 1e-6 of the Poisson(nbar) mass.
PoissonMixture poisson_mixture(const Spinor& c, Real nbar, int n_lo, int n_hi);

}  // namespace spincond
