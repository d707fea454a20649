#pragma once

#include "spincond/fock.hpp"
#include "spincond/trajectory.hpp"

namespace spincond {

// Cached spin operators of one sector: F_a and the symmetrized products
// S_ab = {F_a, F_b}/2, used to read (mean, covariance) off a density matrix.
class SpinObservables {
 public:
  explicit SpinObservables(int n) : n_(n) {
    f_[0] = build_operator(OperatorKind::Fx, n).mat;
    f_[1] = build_operator(OperatorKind::Fy, n).mat;
    f_[2] = build_operator(OperatorKind::Fz, n).mat;
    int k = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b)
        s_[k++] = 0.5 * (f_[a] * f_[b] + f_[b] * f_[a]);
  }

  int n() const { return n_; }
  const MatXc& f(int axis) const { return f_[axis]; }

  Vec3 mean(const DensityMatrix& rho) const {
    Vec3 mu;
    for (int a = 0; a < 3; ++a) mu(a) = expectation(rho, f_[a]).real();
    return mu;
  }

  // order xx, xy, xz, yy, yz, zz
  Eigen::Matrix<Real, kCovEntries, 1> cov(const DensityMatrix& rho,
                                          const Vec3& mu) const {
    Eigen::Matrix<Real, kCovEntries, 1> v;
    const int ai[kCovEntries] = {0, 0, 0, 1, 1, 2};
    const int bi[kCovEntries] = {0, 1, 2, 1, 2, 2};
    for (int k = 0; k < kCovEntries; ++k)
      v(k) = expectation(rho, s_[k]).real() - mu(ai[k]) * mu(bi[k]);
    return v;
  }

 private:
  int n_;
  MatXc f_[3];
  MatXc s_[kCovEntries];
};

}  // namespace spincond
