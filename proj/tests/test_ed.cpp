#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "xxzbell/ed.hpp"

using namespace xxzbell;

namespace {

// Free-fermion closed form for the periodic XX ring in the Pauli
// convention: E = -sum over occupied modes of 4|cos k|-type energies.
double xx_ring_energy(int N) {
  double e = 0.0;
  for (int j = 0; j < N; ++j) {
    const double ek = 4.0 * std::cos(2.0 * M_PI * (j + 0.5) / N);
    if (ek < 0.0) e += ek;
  }
  return e;
}

MeasurementFrame random_frame(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> theta(0.0, M_PI), phi(0.0, 2.0 * M_PI);
  MeasurementFrame f;
  f.n = n;
  for (int k = 0; k < n; ++k) {
    f.a.push_back(UnitVector3::from_angles(theta(rng), phi(rng)));
    f.a_prime.push_back(UnitVector3::from_angles(theta(rng), phi(rng)));
  }
  return f;
}

}  // namespace

TEST_CASE("N=2 periodic convention doubles the bond") {
  // delta=1: H = 2 sigma.sigma on the pair, singlet ground state at -6.
  const auto [e, psi] = exact_ground_state(2, {1.0});
  CHECK(e == doctest::Approx(-6.0).epsilon(1e-10));
  // Singlet: amplitudes on |01>, |10> with opposite signs.
  CHECK(std::abs(psi.amplitudes(1)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
  CHECK(std::abs(psi.amplitudes(2)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
  CHECK(std::abs(psi.amplitudes(1) + psi.amplitudes(2)) <= 1e-8);
  CHECK(std::abs(psi.amplitudes(0)) <= 1e-8);
}

TEST_CASE("XX ring energies match the free-fermion closed form") {
  for (int N : {4, 8, 12}) {
    const auto [e, psi] = exact_ground_state(N, {0.0});
    CHECK(e == doctest::Approx(xx_ring_energy(N)).epsilon(1e-10));
  }
}

TEST_CASE("Heisenberg ring N=4") {
  const auto [e, psi] = exact_ground_state(4, {1.0});
  CHECK(e == doctest::Approx(-8.0).epsilon(1e-10));
  CHECK(psi.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("large-delta ground state approaches the Neel pair") {
  // At delta=8 the two Neel configurations dominate.
  const auto [e, psi] = exact_ground_state(8, {8.0});
  CHECK(e < -8.0 * 8.0);  // below the classical -N*delta energy
  const double neel_weight =
      std::norm(psi.amplitudes(0b10101010)) + std::norm(psi.amplitudes(0b01010101));
  CHECK(neel_weight > 0.9);
}

TEST_CASE("rdm_from_statevector") {
  SUBCASE("GHZ_3 two-site marginal") {
    const ReducedDensityMatrix rho = rdm_from_statevector(ghz_state(3), 0, 2);
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(0, 0) = 0.5;
    expected(3, 3) = 0.5;
    CHECK((rho.matrix - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("pure product marginal is a projector") {
    StateVector s;
    s.n_sites = 3;
    s.amplitudes = ComplexVector::Zero(8);
    s.amplitudes(0) = 1.0;  // |000>
    const ReducedDensityMatrix rho = rdm_from_statevector(s, 1, 2);
    CHECK((rho.matrix * rho.matrix - rho.matrix).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(rho.matrix(0, 0).real() == doctest::Approx(1.0));
  }
  SUBCASE("translation invariance on the periodic ground state") {
    const auto [e, psi] = exact_ground_state(8, {1.3});
    const ReducedDensityMatrix a = rdm_from_statevector(psi, 0, 2);
    const ReducedDensityMatrix b = rdm_from_statevector(psi, 2, 2);
    CHECK((a.matrix - b.matrix).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("trace normalization and hermiticity") {
    const auto [e, psi] = exact_ground_state(6, {0.4});
    const ReducedDensityMatrix rho = rdm_from_statevector(psi, 1, 3);
    CHECK(rho.matrix.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("range checks") {
    CHECK_THROWS_AS(rdm_from_statevector(ghz_state(3), 2, 2), IndexOutOfRange);
  }
}

TEST_CASE("fixture states") {
  const StateVector g2 = ghz_state(2);
  CHECK(g2.amplitudes(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(g2.amplitudes(3).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(g2.amplitudes(1)) == 0.0);
  CHECK(ghz_state(4).amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bell_singlet().amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mk_bruteforce equals the recursion") {
  SUBCASE("n=1 base case") {
    MeasurementFrame f;
    f.n = 1;
    f.a = {UnitVector3(0, 0, 1)};
    f.a_prime = {UnitVector3(1, 0, 0)};
    CHECK((mk_bruteforce(f) - pauli(Axis::z)).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("n=2 explicit pattern") {
    const MeasurementFrame f = random_frame(2, 42);
    const auto& a2 = f.a[1];
    const auto& b2 = f.a_prime[1];
    const ComplexMatrix expected =
        0.5 * (kron(direction_operator(f.a[0]),
                    pauli_combination(a2.x + b2.x, a2.y + b2.y, a2.z + b2.z)) +
               kron(direction_operator(f.a_prime[0]),
                    pauli_combination(a2.x - b2.x, a2.y - b2.y, a2.z - b2.z)));
    CHECK((mk_bruteforce(f) - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("n=2..4 random frames") {
    for (int n = 2; n <= 4; ++n) {
      for (uint64_t seed = 0; seed < 5; ++seed) {
        const MeasurementFrame f = random_frame(n, 100 * n + seed);
        const double err = (mk_bruteforce(f) - mk_operators(f).m).cwiseAbs().maxCoeff();
        CHECK(err <= 1e-12);
      }
    }
  }
  SUBCASE("size cap") {
    CHECK_THROWS_AS(mk_bruteforce(random_frame(5, 1)), ResourceLimit);
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(exact_ground_state(1, {1.0}), ResourceLimit);
  CHECK_THROWS_AS(exact_ground_state(17, {1.0}), ResourceLimit);
}
