#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "xxzbell/ed.hpp"
#include "xxzbell/itebd.hpp"
#include "xxzbell/mps.hpp"

using namespace xxzbell;

TEST_CASE("product state encoding") {
  const MpsState up = product_mps(Spin::up);
  CHECK(up.bond_dim(0) == 1);
  CHECK(up.gamma[0][0](0, 0) == Complex(1, 0));
  CHECK(up.gamma[0][1](0, 0) == Complex(0, 0));
  CHECK(up.canonical);

  const ReducedDensityMatrix rho = reduced_density_matrix(up, 2);
  CHECK(rho.matrix(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rho.matrix.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("random state determinism and normalization") {
  MpsState a = random_mps(16, 7);
  MpsState b = random_mps(16, 7);
  for (int s = 0; s < 2; ++s) {
    CHECK((a.lambda[s] - b.lambda[s]).cwiseAbs().maxCoeff() == 0.0);
    for (int p = 0; p < 2; ++p) {
      CHECK((a.gamma[s][p] - b.gamma[s][p]).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  const MpsState c = random_mps(16, 8);
  CHECK((a.gamma[0][0] - c.gamma[0][0]).cwiseAbs().maxCoeff() > 0.0);

  // Bond weights descending, normalized.
  for (int s = 0; s < 2; ++s) {
    CHECK(a.lambda[s].squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
    for (int i = 1; i < a.lambda[s].size(); ++i) CHECK(a.lambda[s](i) <= a.lambda[s](i - 1));
  }

  // Dominant transfer eigenvalue is 1 after canonicalization.
  const DominantEigenpair pair = dominant_eigenpair(transfer_matrix(a));
  CHECK(std::abs(pair.lambda) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("transfer matrix basics") {
  const MpsState up = product_mps(Spin::up);
  const TransferMatrix t = transfer_matrix(up);
  CHECK(t.matrix.rows() == 1);
  CHECK(t.matrix(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dominant eigenpair on explicit matrices") {
  SUBCASE("diagonal with a gap") {
    TransferMatrix t;
    t.matrix = ComplexMatrix::Zero(2, 2);
    t.matrix(0, 0) = 1.0;
    t.matrix(1, 1) = 0.5;
    const DominantEigenpair p = dominant_eigenpair(t);
    CHECK(std::abs(p.lambda - Complex(1, 0)) <= 1e-10);
    CHECK(std::abs(p.right(0)) > 0.99);
    CHECK(std::abs(p.right(1)) <= 1e-8);
  }
  SUBCASE("1x1") {
    TransferMatrix t;
    t.matrix = ComplexMatrix::Constant(1, 1, Complex(1, 0));
    CHECK(std::abs(dominant_eigenpair(t).lambda - Complex(1, 0)) <= 1e-12);
  }
  SUBCASE("residual on a random contraction-like matrix") {
    TransferMatrix t;
    t.matrix = ComplexMatrix::Zero(4, 4);
    t.matrix << Complex(1.0), Complex(0.1), Complex(0.0), Complex(0.05),
        Complex(0.1), Complex(0.4), Complex(0.02), Complex(0.0),
        Complex(0.0), Complex(0.02), Complex(0.3), Complex(0.1),
        Complex(0.05), Complex(0.0), Complex(0.1), Complex(0.2);
    const DominantEigenpair p = dominant_eigenpair(t);
    CHECK((t.matrix * p.right - p.lambda * p.right).norm() <= 1e-10);
    CHECK((t.matrix.adjoint() * p.left - std::conj(p.lambda) * p.left).norm() <= 1e-10);
  }
  SUBCASE("degenerate dominant eigenvalue throws without a previous vector") {
    TransferMatrix t;
    t.matrix = ComplexMatrix::Identity(2, 2);
    CHECK_THROWS_AS(dominant_eigenpair(t), DegenerateDominantEigenvalue);
  }
}

TEST_CASE("canonicalization fixed point") {
  MpsState s = random_mps(8, 3);
  canonicalize(s);
  REQUIRE(s.canonical);

  // The cached environments are fixed points of the cell transfer map:
  // applying the full cell to env_left[0] reproduces it.
  const int chi = s.bond_dim(1);
  ComplexMatrix y = s.env_left[0];
  for (int site : {0, 1}) {
    ComplexMatrix next = ComplexMatrix::Zero(s.site_tensor[site][0].cols(),
                                             s.site_tensor[site][0].cols());
    for (int p = 0; p < 2; ++p) {
      next += s.site_tensor[site][p].adjoint() * y * s.site_tensor[site][p];
    }
    y = std::move(next);
  }
  CHECK((y - s.env_left[0]).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(y.rows() == chi);

  // Environment pairing is normalized.
  CHECK(std::abs((s.env_left[0] * s.env_right[0]).trace() - Complex(1, 0)) <= 1e-10);
  CHECK(std::abs((s.env_left[1] * s.env_right[1]).trace() - Complex(1, 0)) <= 1e-10);
}

TEST_CASE("reduced density matrices of converged states") {
  auto [state, report] = ground_state({2.0}, 12, default_schedule(), 1);
  REQUIRE(report.converged);

  SUBCASE("trace, hermiticity, positivity") {
    for (int n : {1, 2, 3, 4}) {
      const ReducedDensityMatrix rho = reduced_density_matrix(state, n);
      CHECK(rho.matrix.trace().real() == doctest::Approx(1.0).epsilon(1e-10));
      CHECK((rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
      const auto [w, v] = hermitian_eig(rho.matrix);
      CHECK(w(0) >= -1e-8);
    }
  }

  SUBCASE("partial trace consistency") {
    const ReducedDensityMatrix rho3 = reduced_density_matrix(state, 3);
    const ReducedDensityMatrix rho2 = reduced_density_matrix(state, 2);
    // Trace out the last site of rho3.
    ComplexMatrix traced = ComplexMatrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int p = 0; p < 2; ++p) traced(i, j) += rho3.matrix(2 * i + p, 2 * j + p);
    CHECK((traced - rho2.matrix).cwiseAbs().maxCoeff() <= 1e-9);
  }

  SUBCASE("matches exact diagonalization in the gapped phase") {
    // Trace distance = half the sum of absolute eigenvalues of the difference.
    auto tdist = [](const ComplexMatrix& a, const ComplexMatrix& b) {
      const auto [w, v] = hermitian_eig(a - b);
      return 0.5 * w.cwiseAbs().sum();
    };
    const ReducedDensityMatrix mps = reduced_density_matrix(state, 2);
    double previous = 1.0;
    double distance = 1.0;
    // Finite rings drift toward the infinite-chain RDM as N grows; the
    // N=16 residual at delta=2 is dominated by the ring's finite size.
    for (int N : {8, 12, 16}) {
      const auto [e, psi] = exact_ground_state(N, {2.0});
      distance = tdist(rdm_from_statevector(psi, 0, 2).matrix, mps.matrix);
      CHECK(distance < previous);
      previous = distance;
    }
    CHECK(distance <= 1.5e-2);
  }

  SUBCASE("offset average is offset-symmetric") {
    const ReducedDensityMatrix rho = reduced_density_matrix(state, 2);
    const ReducedDensityMatrix r0 = reduced_density_matrix_at(state, 2, 0);
    const ReducedDensityMatrix r1 = reduced_density_matrix_at(state, 2, 1);
    CHECK((rho.matrix - 0.5 * (r0.matrix + r1.matrix)).cwiseAbs().maxCoeff() <= 1e-10);
  }

  SUBCASE("size cap") {
    CHECK_THROWS_AS(reduced_density_matrix(state, 13), ResourceLimit);
  }
}

TEST_CASE("expectation_local") {
  const MpsState up = product_mps(Spin::up);
  CHECK(expectation_local(up, ComplexMatrix::Identity(2, 2), SiteParity::even) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expectation_local(up, pauli(Axis::z), SiteParity::even) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Cross-check against Tr(rho h) on a converged state.
  auto [state, report] = ground_state({1.5}, 10, default_schedule(), 2);
  const ComplexMatrix h = two_site_hamiltonian({1.5});
  const double direct = 0.5 * (expectation_local(state, h, SiteParity::even) +
                               expectation_local(state, h, SiteParity::odd));
  const ReducedDensityMatrix rho2 = reduced_density_matrix(state, 2);
  CHECK(direct == doctest::Approx((rho2.matrix * h).trace().real()).epsilon(1e-10));

  CHECK_THROWS_AS(expectation_local(up, ComplexMatrix::Identity(32, 32), SiteParity::even),
                  ResourceLimit);
}

TEST_CASE("checkpoint round trip") {
  MpsState s = random_mps(6, 11);
  s.delta = 1.25;
  s.converged = true;
  const std::string path = "checkpoint_test.bin";
  save_checkpoint(s, path);
  const MpsState loaded = load_checkpoint(path);
  std::remove(path.c_str());

  CHECK(loaded.delta == s.delta);
  CHECK(loaded.seed == s.seed);
  CHECK(loaded.converged == s.converged);
  for (int site = 0; site < 2; ++site) {
    CHECK((loaded.lambda[site] - s.lambda[site]).cwiseAbs().maxCoeff() == 0.0);
    for (int p = 0; p < 2; ++p) {
      // Loading re-canonicalizes; the unit rescale may cost one ulp.
      CHECK((loaded.gamma[site][p] - s.gamma[site][p]).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
  CHECK(loaded.canonical);

  CHECK_THROWS_AS(load_checkpoint("missing_checkpoint.bin"), IoError);
}
