#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "xxzbell/ed.hpp"
#include "xxzbell/itebd.hpp"
#include "xxzbell/optimizer.hpp"

using namespace xxzbell;

namespace {

ReducedDensityMatrix density(const StateVector& s) {
  return rdm_from_statevector(s, 0, s.n_sites);
}

}  // namespace

TEST_CASE("singlet optimization reaches the Tsirelson value") {
  const ReducedDensityMatrix singlet = density(bell_singlet());
  SUBCASE("xy plane") {
    const OptimizationResult r = optimize(Objective::mermin, singlet, 2, {PlaneKind::xy}, 16, 1);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  }
  SUBCASE("full sphere") {
    const OptimizationResult r = optimize(Objective::mermin, singlet, 2, {PlaneKind::full}, 16, 1);
    CHECK(r.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  }
}

TEST_CASE("GHZ states reach 2^((n-1)/2)") {
  for (int n : {2, 3, 4}) {
    const ReducedDensityMatrix rho = density(ghz_state(n));
    const OptimizationResult r = optimize(Objective::mermin, rho, n, {PlaneKind::xy}, 24, 2);
    CHECK(r.value == doctest::Approx(std::pow(2.0, 0.5 * (n - 1))).epsilon(1e-6));
  }
}

TEST_CASE("horodecki closed form") {
  CHECK(horodecki_m2(density(bell_singlet())) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  StateVector product;
  product.n_sites = 2;
  product.amplitudes = ComplexVector::Zero(4);
  product.amplitudes(0) = 1.0;
  CHECK(horodecki_m2(density(product)) == doctest::Approx(1.0).epsilon(1e-12));

  ReducedDensityMatrix mixed{2, ComplexMatrix::Identity(4, 4) / 4.0};
  CHECK(horodecki_m2(mixed) <= 1e-12);

  ReducedDensityMatrix wrong{3, ComplexMatrix::Identity(8, 8) / 8.0};
  CHECK_THROWS_AS(horodecki_m2(wrong), DimensionMismatch);
}

TEST_CASE("optimizer certificate matches re-evaluation") {
  const ReducedDensityMatrix rho = density(ghz_state(3));
  const OptimizationResult r = optimize(Objective::svetlichny, rho, 3, {PlaneKind::xy}, 16, 5);
  BellEvaluator evaluator(rho);
  CHECK(r.value == doctest::Approx(evaluator.value(Objective::svetlichny, r.frame)).epsilon(1e-9));
}

TEST_CASE("optimization is deterministic in the seed") {
  const ReducedDensityMatrix rho = density(ghz_state(3));
  const OptimizationResult a = optimize(Objective::mermin, rho, 3, {PlaneKind::full}, 8, 42);
  const OptimizationResult b = optimize(Objective::mermin, rho, 3, {PlaneKind::full}, 8, 42);
  CHECK(a.value == b.value);
  CHECK(a.best_restart_index == b.best_restart_index);
  for (int k = 0; k < 3; ++k) {
    CHECK(a.frame.a[k].x == b.frame.a[k].x);
    CHECK(a.frame.a_prime[k].z == b.frame.a_prime[k].z);
  }
}

TEST_CASE("plane constraints restrict the frame") {
  const ReducedDensityMatrix rho = density(ghz_state(3));
  const OptimizationResult xy = optimize(Objective::mermin, rho, 3, {PlaneKind::xy}, 8, 7);
  for (const auto& v : xy.frame.a) CHECK(std::abs(v.z) <= 1e-12);
  const OptimizationResult xz = optimize(Objective::mermin, rho, 3, {PlaneKind::xz}, 8, 7);
  for (const auto& v : xz.frame.a) CHECK(std::abs(v.y) <= 1e-12);
}

TEST_CASE("warm starts are appended as extra searches") {
  const ReducedDensityMatrix rho = density(ghz_state(3));
  BellEvaluator evaluator(rho);
  const OptimizationResult base = optimize(Objective::mermin, evaluator, {PlaneKind::xy}, 16, 3);
  const OptimizationResult warmed =
      optimize(Objective::mermin, evaluator, {PlaneKind::xy}, 1, 3, {base.frame});
  CHECK(warmed.restarts_used == 2);
  CHECK(warmed.value >= base.value - 1e-9);
}

TEST_CASE("XXZ ground state cross-checks") {
  auto [state, report] = ground_state({2.0}, 12, default_schedule(), 1);
  REQUIRE(report.converged);
  const ReducedDensityMatrix rho2 = reduced_density_matrix(state, 2);

  SUBCASE("full-sphere optimum equals the Horodecki value") {
    const OptimizationResult r = optimize(Objective::mermin, rho2, 2, {PlaneKind::full}, 32, 1);
    CHECK(std::abs(r.value - horodecki_m2(rho2)) <= 1e-4);
  }

  SUBCASE("both-planes driver") {
    BellEvaluator evaluator(rho2);
    const PlanePair planes = optimize_both_planes(Objective::mermin, evaluator, 16, 1);
    REQUIRE(planes.full.has_value());
    CHECK(planes.best.value ==
          doctest::Approx(std::max(planes.xy.value, planes.xz.value)).epsilon(1e-9));
    CHECK(planes.full->value >= planes.best.value - 1e-4);
    // Plane-max property: the unconstrained optimum is attained in a plane.
    CHECK(std::abs(planes.full->value - planes.best.value) <= 1e-4);
  }

  SUBCASE("dense and contracted backends agree after optimization") {
    BellEvaluator dense(rho2);
    BellEvaluator contracted(state, 2);
    const OptimizationResult r = optimize(Objective::mermin, dense, {PlaneKind::xy}, 8, 9);
    CHECK(dense.value(Objective::mermin, r.frame) ==
          doctest::Approx(contracted.value(Objective::mermin, r.frame)).epsilon(1e-9));
  }
}

TEST_CASE("argument validation") {
  const ReducedDensityMatrix rho = density(ghz_state(3));
  CHECK_THROWS_AS(optimize(Objective::mermin, rho, 2, {PlaneKind::xy}, 8, 1),
                  DimensionMismatch);
  BellEvaluator evaluator(rho);
  CHECK_THROWS_AS(optimize(Objective::mermin, evaluator, {PlaneKind::xy}, 0, 1),
                  DimensionMismatch);
  MpsState s = random_mps(4, 1);
  s.invalidate();
  CHECK_THROWS_AS(BellEvaluator(s, 2), NotCanonicalized);
}
