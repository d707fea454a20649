#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace spincond {

using Real = double;
using Complex = std::complex<Real>;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using VecXc = Eigen::VectorXcd;
using MatX = Eigen::MatrixXd;
using MatXc = Eigen::MatrixXcd;

// Single-atom spin-1 amplitudes (c_+, c_0, c_-) in the z basis.
struct Spinor {
  Complex plus{0.0, 0.0};
  Complex zero{0.0, 0.0};
  Complex minus{0.0, 0.0};

  Real norm_squared() const {
    return std::norm(plus) + std::norm(zero) + std::norm(minus);
  }
  Real p_plus() const { return std::norm(plus); }
  Real p_zero() const { return std::norm(zero); }
  Real p_minus() const { return std::norm(minus); }

  // Stretched state along a coordinate axis ("x", "y" or "z").
  static Spinor polarized(char axis);
};

inline Spinor Spinor::polarized(char axis) {
  const Real r2 = 1.0 / std::sqrt(2.0);
  switch (axis) {
    case 'x':
      return Spinor{{0.5, 0.0}, {r2, 0.0}, {0.5, 0.0}};
    case 'y':
      return Spinor{{0.5, 0.0}, {0.0, r2}, {-0.5, 0.0}};
    case 'z':
      return Spinor{{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
    default:
      throw std::invalid_argument("Spinor::polarized: axis must be x, y or z");
  }
}

}  // namespace spincond
