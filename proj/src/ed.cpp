#include "xxzbell/ed.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace xxzbell {

namespace {

// H |v> for the N-site periodic XXZ chain; real symmetric in the sigma_z
// basis. Site k occupies bit (N-1-k); bit 0 means spin up.
void apply_hamiltonian(int N, double delta, const Eigen::VectorXd& v, Eigen::VectorXd& out) {
  const size_t dim = size_t(1) << N;
  out.setZero();
  for (int k = 0; k < N; ++k) {
    const int b1 = N - 1 - k;
    const int b2 = N - 1 - ((k + 1) % N);
    const size_t m1 = size_t(1) << b1;
    const size_t m2 = size_t(1) << b2;
    for (size_t idx = 0; idx < dim; ++idx) {
      const bool s1 = idx & m1;
      const bool s2 = idx & m2;
      if (s1 == s2) {
        out(idx) += delta * v(idx);
      } else {
        out(idx) -= delta * v(idx);
        out(idx ^ m1 ^ m2) += 2.0 * v(idx);  // sigma_x sigma_x + sigma_y sigma_y
      }
    }
  }
}

}  // namespace

std::pair<double, StateVector> exact_ground_state(int N, XxzCoupling c) {
  if (N < 2 || N > 16) throw ResourceLimit("exact_ground_state: N must be in [2, 16]");
  const size_t dim = size_t(1) << N;
  const int max_basis = std::min<int>(150, static_cast<int>(dim));

  std::mt19937_64 rng(0xed0c1eULL);
  Eigen::VectorXd x(dim);
  for (size_t i = 0; i < dim; ++i) {
    x(i) = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  }
  x.normalize();

  double theta = 0.0;
  Eigen::VectorXd hx(dim), w(dim);
  for (int restart = 0; restart < 12; ++restart) {
    std::vector<Eigen::VectorXd> basis;
    basis.reserve(max_basis);
    std::vector<double> alpha, beta;
    basis.push_back(x);
    for (int j = 0; j < max_basis; ++j) {
      apply_hamiltonian(N, c.delta, basis[j], w);
      if (j > 0) w -= beta[j - 1] * basis[j - 1];
      alpha.push_back(basis[j].dot(w));
      w -= alpha[j] * basis[j];
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) w -= b.dot(w) * b;
      }
      const double norm = w.norm();
      if (norm < 1e-12 || j == max_basis - 1) break;
      beta.push_back(norm);
      basis.push_back(w / norm);
    }

    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(tri);
    theta = solver.eigenvalues()(0);
    const Eigen::VectorXd y = solver.eigenvectors().col(0);
    x.setZero();
    for (int i = 0; i < m; ++i) x += y(i) * basis[i];
    x.normalize();

    apply_hamiltonian(N, c.delta, x, hx);
    if ((hx - theta * x).norm() <= 1e-10 * std::max(1.0, std::abs(theta))) break;
  }

  apply_hamiltonian(N, c.delta, x, hx);
  theta = x.dot(hx);
  if ((hx - theta * x).norm() > 1e-8 * std::max(1.0, std::abs(theta))) {
    throw ConvergenceFailure("exact_ground_state: Lanczos residual too large");
  }

  StateVector state;
  state.n_sites = N;
  state.amplitudes = x.cast<Complex>();
  return {theta, state};
}

ReducedDensityMatrix rdm_from_statevector(const StateVector& state, int first_site, int n) {
  const int N = state.n_sites;
  if (first_site < 0 || n < 1 || first_site + n > N) {
    throw IndexOutOfRange("rdm_from_statevector: sites out of range");
  }
  const int right_bits = N - first_site - n;
  const size_t n_left = size_t(1) << first_site;
  const size_t n_mid = size_t(1) << n;
  const size_t n_right = size_t(1) << right_bits;

  ComplexMatrix rho = ComplexMatrix::Zero(n_mid, n_mid);
  for (size_t l = 0; l < n_left; ++l) {
    for (size_t r = 0; r < n_right; ++r) {
      const size_t base = (l << (n + right_bits)) | r;
      for (size_t m1 = 0; m1 < n_mid; ++m1) {
        const Complex amp1 = state.amplitudes(base | (m1 << right_bits));
        if (amp1 == Complex(0, 0)) continue;
        for (size_t m2 = 0; m2 < n_mid; ++m2) {
          rho(m1, m2) += amp1 * std::conj(state.amplitudes(base | (m2 << right_bits)));
        }
      }
    }
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return {n, rho};
}

StateVector ghz_state(int n) {
  if (n < 2) throw DimensionMismatch("ghz_state: n must be >= 2");
  StateVector s;
  s.n_sites = n;
  s.amplitudes = ComplexVector::Zero(Eigen::Index(1) << n);
  const double amp = 1.0 / std::sqrt(2.0);
  s.amplitudes(0) = amp;
  s.amplitudes(s.amplitudes.size() - 1) = amp;
  return s;
}

StateVector bell_singlet() {
  StateVector s;
  s.n_sites = 2;
  s.amplitudes = ComplexVector::Zero(4);
  const double amp = 1.0 / std::sqrt(2.0);
  s.amplitudes(1) = amp;   // |01>
  s.amplitudes(2) = -amp;  // |10>
  return s;
}

ComplexMatrix mk_bruteforce(const MeasurementFrame& frame) {
  frame.validate();
  const int n = frame.n;
  if (n > 4) throw ResourceLimit("mk_bruteforce: n must be <= 4");

  // Unfold the recursion into coefficients over the 2^n strings of
  // primed/unprimed choices (site k occupies bit n-1-k).
  std::vector<double> c = {1.0, 0.0}, cp = {0.0, 1.0};
  for (int k = 1; k < n; ++k) {
    std::vector<double> nc(c.size() * 2), ncp(c.size() * 2);
    for (size_t s = 0; s < c.size(); ++s) {
      nc[2 * s] = 0.5 * (c[s] + cp[s]);
      nc[2 * s + 1] = 0.5 * (c[s] - cp[s]);
      ncp[2 * s] = 0.5 * (cp[s] - c[s]);
      ncp[2 * s + 1] = 0.5 * (cp[s] + c[s]);
    }
    c = std::move(nc);
    cp = std::move(ncp);
  }

  const Eigen::Index dim = Eigen::Index(1) << n;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (size_t s = 0; s < c.size(); ++s) {
    if (c[s] == 0.0) continue;
    ComplexMatrix term = ComplexMatrix::Identity(1, 1);
    for (int k = 0; k < n; ++k) {
      const bool primed = (s >> (n - 1 - k)) & 1;
      term = kron(term, direction_operator(primed ? frame.a_prime[k] : frame.a[k]));
    }
    m += c[s] * term;
  }
  return m;
}

}  // namespace xxzbell
