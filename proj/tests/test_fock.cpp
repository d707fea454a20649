#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spincond/fock.hpp"
#include "spincond/rng.hpp"

using namespace spincond;

namespace {

// independent enumeration oracle for the sector size
int count_triples(int n) {
  int count = 0;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      for (int c = 0; c <= n; ++c)
        if (a + b + c == n) ++count;
  return count;
}

Real max_abs(const MatXc& m) { return m.cwiseAbs().maxCoeff(); }

Spinor random_spinor(Rng& rng) {
  Spinor c{{rng.normal(), rng.normal()},
           {rng.normal(), rng.normal()},
           {rng.normal(), rng.normal()}};
  const Real nrm = std::sqrt(c.norm_squared());
  c.plus /= nrm;
  c.zero /= nrm;
  c.minus /= nrm;
  return c;
}

}  // namespace

TEST_CASE("sector dimension") {
  CHECK(sector_dimension(1) == 3);
  CHECK(sector_dimension(0) == 1);
  CHECK(sector_dimension(4) == 15);
  CHECK(sector_dimension(4) == count_triples(4));
  for (int n = 0; n <= 12; ++n) CHECK(sector_dimension(n) == count_triples(n));
  CHECK_THROWS_AS(sector_dimension(-1), std::invalid_argument);
}

TEST_CASE("basis order is lexicographic descending and self-consistent") {
  SectorBasis basis(2);
  CHECK(basis.at(0) == Occupation{2, 0, 0});
  CHECK(basis.at(1) == Occupation{1, 1, 0});
  CHECK(basis.at(2) == Occupation{1, 0, 1});
  CHECK(basis.at(3) == Occupation{0, 2, 0});
  CHECK(basis.at(4) == Occupation{0, 1, 1});
  CHECK(basis.at(5) == Occupation{0, 0, 2});
  for (int n : {0, 1, 3, 7}) {
    SectorBasis b(n);
    for (int i = 0; i < b.dim(); ++i) CHECK(b.index(b.at(i)) == i);
  }
  CHECK_THROWS_AS(SectorBasis(2).index(Occupation{1, 0, 0}), std::invalid_argument);
}

TEST_CASE("product state amplitudes") {
  SUBCASE("stretched state, n = 3") {
    const FockState s = build_product_state(Spinor{{1, 0}, {0, 0}, {0, 0}}, 3);
    SectorBasis basis(3);
    CHECK(std::abs(s.amplitudes(basis.index({3, 0, 0})) - Complex(1, 0)) < 1e-14);
    CHECK(s.amplitudes.norm() == doctest::Approx(1.0));
    for (int i = 1; i < basis.dim(); ++i) CHECK(std::abs(s.amplitudes(i)) < 1e-14);
  }
  SUBCASE("single atom in m = 0") {
    const FockState s = build_product_state(Spinor{{0, 0}, {1, 0}, {0, 0}}, 1);
    SectorBasis basis(1);
    CHECK(std::abs(s.amplitudes(basis.index({0, 1, 0})) - Complex(1, 0)) < 1e-14);
  }
  SUBCASE("(1,0,1)/sqrt(2), n = 2: expand (a+^dag + a-^dag)^2/2 on vacuum") {
    const Real r2 = 1.0 / std::sqrt(2.0);
    const FockState s = build_product_state(Spinor{{r2, 0}, {0, 0}, {r2, 0}}, 2);
    SectorBasis basis(2);
    CHECK(s.amplitudes(basis.index({2, 0, 0})).real() == doctest::Approx(0.5));
    CHECK(s.amplitudes(basis.index({1, 0, 1})).real() == doctest::Approx(r2));
    CHECK(s.amplitudes(basis.index({0, 0, 2})).real() == doctest::Approx(0.5));
  }
  SUBCASE("unnormalized input rejected") {
    CHECK_THROWS_AS(build_product_state(Spinor{{1, 0}, {0.1, 0}, {0, 0}}, 2),
                    std::invalid_argument);
  }
  SUBCASE("normalization invariant") {
    Rng rng(42);
    for (int rep = 0; rep < 5; ++rep) {
      const FockState s = build_product_state(random_spinor(rng), 9);
      CHECK(std::abs(s.amplitudes.squaredNorm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("amplitudes squared are the multinomial distribution") {
  Rng rng(7);
  const Spinor c = random_spinor(rng);
  const int n = 6;
  const FockState s = build_product_state(c, n);
  SectorBasis basis(n);
  const Real p[3] = {c.p_plus(), c.p_zero(), c.p_minus()};
  for (int i = 0; i < basis.dim(); ++i) {
    const Occupation& j = basis.at(i);
    const Real multinom = std::exp(std::lgamma(n + 1.0) - std::lgamma(j.plus + 1.0) -
                                   std::lgamma(j.zero + 1.0) -
                                   std::lgamma(j.minus + 1.0)) *
                          std::pow(p[0], j.plus) * std::pow(p[1], j.zero) *
                          std::pow(p[2], j.minus);
    CHECK(std::norm(s.amplitudes(i)) == doctest::Approx(multinom).epsilon(1e-10));
  }
}

TEST_CASE("operators") {
  SUBCASE("F_z for one atom is diag(+1, 0, -1)") {
    const SectorOperator fz = build_operator(OperatorKind::Fz, 1);
    MatXc expected(3, 3);
    expected << 1, 0, 0, 0, 0, 0, 0, 0, -1;
    CHECK(max_abs(fz.mat - expected) < 1e-14);
  }
  SUBCASE("N_0 eigenvalue on (0,2,0)") {
    const SectorOperator n0 = build_operator(OperatorKind::NZero, 2);
    const FockState s = build_product_state(Spinor{{0, 0}, {1, 0}, {0, 0}}, 2);
    CHECK(expectation_real(pure_density(s), n0) == doctest::Approx(2.0));
  }
  SUBCASE("F_x for one atom couples m = +-1 to m = 0 with 1/sqrt(2)") {
    const SectorOperator fx = build_operator(OperatorKind::Fx, 1);
    const Real r2 = 1.0 / std::sqrt(2.0);
    MatXc expected(3, 3);
    expected << 0, r2, 0, r2, 0, r2, 0, r2, 0;
    CHECK(max_abs(fx.mat - expected) < 1e-14);
  }
  SUBCASE("unknown kind string") {
    CHECK_THROWS_AS(operator_kind_from_string("f_q"), std::invalid_argument);
    CHECK(operator_kind_from_string("f_x") == OperatorKind::Fx);
  }
}

TEST_CASE("commutator algebra and number identity on every sector") {
  for (int n = 1; n <= 6; ++n) {
    const MatXc fx = build_operator(OperatorKind::Fx, n).mat;
    const MatXc fy = build_operator(OperatorKind::Fy, n).mat;
    const MatXc fz = build_operator(OperatorKind::Fz, n).mat;
    const Complex i1(0, 1);
    CHECK(max_abs(fx * fy - fy * fx - i1 * fz) < 1e-12);
    CHECK(max_abs(fy * fz - fz * fy - i1 * fx) < 1e-12);
    CHECK(max_abs(fz * fx - fx * fz - i1 * fy) < 1e-12);

    const MatXc ntot = build_operator(OperatorKind::NPlus, n).mat +
                       build_operator(OperatorKind::NZero, n).mat +
                       build_operator(OperatorKind::NMinus, n).mat;
    CHECK(max_abs(ntot - Real(n) * MatXc::Identity(ntot.rows(), ntot.cols())) <
          1e-12);

    // Hermiticity
    CHECK(max_abs(fx - fx.adjoint()) < 1e-13);
    CHECK(max_abs(fy - fy.adjoint()) < 1e-13);
  }
}

TEST_CASE("expectation values") {
  SUBCASE("single atom: <F_z> = p+ - p-") {
    Rng rng(3);
    for (int rep = 0; rep < 4; ++rep) {
      const Spinor c = random_spinor(rng);
      const DensityMatrix rho = pure_density(build_product_state(c, 1));
      const SectorOperator fz = build_operator(OperatorKind::Fz, 1);
      CHECK(expectation_real(rho, fz) ==
            doctest::Approx(c.p_plus() - c.p_minus()).epsilon(1e-10));
      CHECK(std::abs(expectation(rho, fz).imag()) < 1e-10);
    }
  }
  SUBCASE("all atoms in m = 0: <F_z^2> = 0") {
    const DensityMatrix rho =
        pure_density(build_product_state(Spinor{{0, 0}, {1, 0}, {0, 0}}, 5));
    const MatXc fz = build_operator(OperatorKind::Fz, 5).mat;
    CHECK(std::abs(expectation(rho, MatXc(fz * fz))) < 1e-12);
  }
  SUBCASE("(1,0,1)/sqrt(2), n = 2: <F_z^2> = 2") {
    const Real r2 = 1.0 / std::sqrt(2.0);
    const DensityMatrix rho =
        pure_density(build_product_state(Spinor{{r2, 0}, {0, 0}, {r2, 0}}, 2));
    const MatXc fz = build_operator(OperatorKind::Fz, 2).mat;
    CHECK(expectation(rho, MatXc(fz * fz)).real() == doctest::Approx(2.0));
  }
  SUBCASE("dimension mismatch") {
    const DensityMatrix rho =
        pure_density(build_product_state(Spinor::polarized('z'), 2));
    CHECK_THROWS_AS(expectation(rho, build_operator(OperatorKind::Fz, 3)),
                    std::invalid_argument);
  }
}

TEST_CASE("product-state moments: <F_z> = n(p+ - p-), <N_i> = n p_i") {
  Rng rng(11);
  const int n = 7;
  const Spinor c = random_spinor(rng);
  const DensityMatrix rho = pure_density(build_product_state(c, n));
  CHECK(expectation_real(rho, build_operator(OperatorKind::Fz, n)) ==
        doctest::Approx(n * (c.p_plus() - c.p_minus())).epsilon(1e-9));
  CHECK(expectation_real(rho, build_operator(OperatorKind::NPlus, n)) ==
        doctest::Approx(n * c.p_plus()).epsilon(1e-9));
  CHECK(expectation_real(rho, build_operator(OperatorKind::NZero, n)) ==
        doctest::Approx(n * c.p_zero()).epsilon(1e-9));
  CHECK(expectation_real(rho, build_operator(OperatorKind::NMinus, n)) ==
        doctest::Approx(n * c.p_minus()).epsilon(1e-9));
}

TEST_CASE("stretched state: <F_z> = n with zero variance") {
  const int n = 9;
  const DensityMatrix rho =
      pure_density(build_product_state(Spinor{{1, 0}, {0, 0}, {0, 0}}, n));
  const MatXc fz = build_operator(OperatorKind::Fz, n).mat;
  CHECK(expectation(rho, fz).real() == doctest::Approx(n));
  const Real fz2 = expectation(rho, MatXc(fz * fz)).real();
  CHECK(fz2 - n * n == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("density matrix invariants") {
  Rng rng(5);
  const DensityMatrix rho = pure_density(build_product_state(random_spinor(rng), 6));
  CHECK(max_abs(rho.rho - rho.rho.adjoint()) < 1e-10);
  CHECK(std::abs(rho.trace_real() - 1.0) < 1e-10);
  CHECK(min_eigenvalue(rho) > -1e-8);
  CHECK(rho.purity() == doctest::Approx(1.0));
}

TEST_CASE("poisson mixture") {
  const Spinor c = Spinor::polarized('x');
  SUBCASE("weight on n = 4 at nbar = 4 over [0, 20]") {
    const PoissonMixture mix = poisson_mixture(c, 4.0, 0, 20);
    const auto it = std::find(mix.sector_n.begin(), mix.sector_n.end(), 4);
    REQUIRE(it != mix.sector_n.end());
    const size_t idx = static_cast<size_t>(it - mix.sector_n.begin());
    // e^-4 4^4 / 4! = 0.19536681..., renormalized over the window
    CHECK(mix.weights[idx] == doctest::Approx(0.19536681481316456).epsilon(1e-6));
    CHECK(mix.renormalization == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("window mean tracks nbar") {
    const PoissonMixture mix = poisson_mixture(c, 6.5, 0, 40);
    CHECK(mix.mean_n() == doctest::Approx(6.5).epsilon(1e-6));
  }
  SUBCASE("weights are normalized") {
    const PoissonMixture mix = poisson_mixture(c, 3.0, 0, 25);
    Real total = 0.0;
    for (Real w : mix.weights) total += w;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("insufficient window rejected") {
    CHECK_THROWS_AS(poisson_mixture(c, 30.0, 0, 10), std::invalid_argument);
    CHECK_THROWS_AS(poisson_mixture(c, 4.0, 5, 2), std::invalid_argument);
  }
}
