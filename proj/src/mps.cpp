#include "xxzbell/mps.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <vector>

namespace xxzbell {

namespace {

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

Eigen::VectorXd sqrt_weights(const Eigen::VectorXd& lambda) {
  return lambda.array().sqrt().matrix();
}

// Deterministic double in [-1, 1) from the raw engine stream; avoids the
// implementation-defined std::uniform_real_distribution.
double unit_draw(std::mt19937_64& rng) {
  return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}

ComplexVector deterministic_start(Eigen::Index dim, int salt) {
  // vec(identity)-like start with a fixed pseudorandom perturbation so the
  // iteration never starts orthogonal to the dominant eigenvector.
  std::mt19937_64 rng(0x5eedULL + static_cast<uint64_t>(salt));
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(dim))));
  ComplexVector v = ComplexVector::Zero(dim);
  if (d * d == dim) {
    for (Eigen::Index i = 0; i < d; ++i) v(i * d + i) = 1.0;
  }
  for (Eigen::Index i = 0; i < dim; ++i) v(i) += 0.05 * unit_draw(rng);
  v.normalize();
  return v;
}

struct PowerResult {
  Complex lambda;
  ComplexVector vector;
  bool converged;
};

PowerResult power_iterate(const ComplexMatrix& t, ComplexVector v, double tol,
                          int max_iters) {
  v.normalize();
  Complex lambda(0, 0);
  double residual = 1.0;
  double best_residual = std::numeric_limits<double>::max();
  int stagnant = 0;
  int salt = 1;
  for (int it = 0; it < max_iters; ++it) {
    ComplexVector tv = t * v;
    lambda = v.dot(tv);  // Rayleigh quotient (v normalized)
    residual = (tv - lambda * v).norm();
    if (residual <= tol * (std::abs(lambda) + 1e-300)) {
      return {lambda, v, true};
    }
    if (residual < 0.999 * best_residual) {
      best_residual = residual;
      stagnant = 0;
    } else if (++stagnant > 2000) {
      // Stagnation (e.g. complex-pair contamination): restart from a fresh
      // deterministic vector.
      v = deterministic_start(v.size(), ++salt);
      best_residual = std::numeric_limits<double>::max();
      stagnant = 0;
      continue;
    }
    double n = tv.norm();
    if (n == 0.0) return {Complex(0, 0), v, true};  // nilpotent direction
    v = tv / n;
  }
  return {lambda, v, false};
}

void fix_phase(ComplexVector& v) {
  const double cutoff = 1e-8 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > cutoff) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
  }
}

}  // namespace

MpsState product_mps(Spin spin) {
  MpsState s;
  ComplexMatrix one(1, 1), zero(1, 1);
  one << 1.0;
  zero << 0.0;
  const int up = (spin == Spin::up) ? 0 : 1;
  for (int site = 0; site < 2; ++site) {
    s.gamma[site][up] = one;
    s.gamma[site][1 - up] = zero;
  }
  s.lambda[0] = Eigen::VectorXd::Ones(1);
  s.lambda[1] = Eigen::VectorXd::Ones(1);
  canonicalize(s);
  return s;
}

MpsState random_mps(int D, uint64_t seed) {
  MpsState s;
  s.seed = seed;
  std::mt19937_64 rng(seed);
  for (int site = 0; site < 2; ++site) {
    for (int p = 0; p < 2; ++p) {
      ComplexMatrix g(D, D);
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) g(i, j) = Complex(unit_draw(rng), 0.0);
      s.gamma[site][p] = g;
    }
  }
  for (int bond = 0; bond < 2; ++bond) {
    Eigen::VectorXd l(D);
    for (int i = 0; i < D; ++i) l(i) = 0.5 + 0.5 * std::abs(unit_draw(rng));
    std::sort(l.data(), l.data() + D, std::greater<double>());
    l /= l.norm();
    s.lambda[bond] = l;
  }
  canonicalize(s);
  return s;
}

static std::array<std::array<ComplexMatrix, 2>, 2> build_site_tensors(const MpsState& s) {
  std::array<std::array<ComplexMatrix, 2>, 2> a;
  const Eigen::VectorXd s0 = sqrt_weights(s.lambda[0]);
  const Eigen::VectorXd s1 = sqrt_weights(s.lambda[1]);
  for (int p = 0; p < 2; ++p) {
    a[0][p] = s1.asDiagonal() * s.gamma[0][p] * s0.asDiagonal();
    a[1][p] = s0.asDiagonal() * s.gamma[1][p] * s1.asDiagonal();
  }
  return a;
}

TransferMatrix transfer_matrix(const MpsState& s) {
  const auto a = s.canonical ? s.site_tensor : build_site_tensors(s);
  ComplexMatrix t0 = kron(a[0][0].conjugate(), a[0][0]) + kron(a[0][1].conjugate(), a[0][1]);
  ComplexMatrix t1 = kron(a[1][0].conjugate(), a[1][0]) + kron(a[1][1].conjugate(), a[1][1]);
  return {t0 * t1};
}

DominantEigenpair dominant_eigenpair(const TransferMatrix& t,
                                     const ComplexVector* previous_right) {
  const ComplexMatrix& m = t.matrix;
  if (m.rows() != m.cols()) throw DimensionMismatch("dominant_eigenpair: non-square");

  DominantEigenpair ep;
  if (m.rows() > 1024) {
    // Too large for a dense solve; assumes a unique dominant eigenvalue.
    constexpr double kTol = 1e-12;
    constexpr int kMaxIters = 200000;
    ComplexVector start = (previous_right && previous_right->size() == m.rows())
                              ? *previous_right
                              : deterministic_start(m.rows(), 0);
    PowerResult right = power_iterate(m, start, kTol, kMaxIters);
    if (!right.converged) {
      throw ConvergenceFailure("dominant_eigenpair: power iteration did not converge");
    }
    PowerResult left = power_iterate(m.adjoint(), right.vector, kTol, kMaxIters);
    if (!left.converged) {
      throw ConvergenceFailure("dominant_eigenpair: left power iteration did not converge");
    }
    ep.lambda = right.lambda;
    ep.right = right.vector;
    ep.left = left.vector;
  } else {
    Eigen::ComplexEigenSolver<ComplexMatrix> right_solver(m);
    Eigen::ComplexEigenSolver<ComplexMatrix> left_solver(m.adjoint());
    if (right_solver.info() != Eigen::Success || left_solver.info() != Eigen::Success) {
      throw ConvergenceFailure("dominant_eigenpair: dense eigensolver failed");
    }
    const ComplexVector& values = right_solver.eigenvalues();
    const double max_modulus = values.cwiseAbs().maxCoeff();

    // The physical environment belongs to a positive (near-)real dominant
    // eigenvalue; complex-phase partners of equal modulus are oscillatory
    // directions (decoupled blocks, enlarged effective cells) that cannot
    // carry a positive fixed point.
    std::vector<Eigen::Index> candidates;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      if (std::abs(values(i)) >= max_modulus * (1.0 - 1e-10) && values(i).real() > 0.0 &&
          std::abs(values(i).imag()) <= 1e-8 * max_modulus) {
        candidates.push_back(i);
      }
    }
    if (candidates.empty()) {
      for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (std::abs(values(i)) >= max_modulus * (1.0 - 1e-10)) candidates.push_back(i);
      }
    }

    Eigen::Index chosen = candidates.front();
    if (candidates.size() > 1) {
      if (!previous_right || previous_right->size() != m.rows()) {
        throw DegenerateDominantEigenvalue(
            "dominant eigenvalue degenerate within 1e-10; supply a previous fixed point");
      }
      double best = -1.0;
      for (Eigen::Index i : candidates) {
        const double overlap = std::abs(previous_right->dot(right_solver.eigenvectors().col(i)));
        if (overlap > best) {
          best = overlap;
          chosen = i;
        }
      }
    }
    ep.lambda = values(chosen);
    ep.right = right_solver.eigenvectors().col(chosen);

    // Matching left eigenvector: eigenvalue conj(lambda), biorthogonal to
    // the chosen right vector (maximal |<l|r>| inside a degenerate block).
    const ComplexVector& left_values = left_solver.eigenvalues();
    Eigen::Index left_chosen = -1;
    double best_overlap = -1.0;
    for (Eigen::Index i = 0; i < left_values.size(); ++i) {
      if (std::abs(left_values(i) - std::conj(ep.lambda)) > 1e-6 * std::max(1.0, max_modulus)) {
        continue;
      }
      const double overlap = std::abs(left_solver.eigenvectors().col(i).dot(ep.right));
      if (overlap > best_overlap) {
        best_overlap = overlap;
        left_chosen = i;
      }
    }
    if (left_chosen < 0) {
      throw ConvergenceFailure("dominant_eigenpair: no matching left eigenvalue");
    }
    ep.left = left_solver.eigenvectors().col(left_chosen);
  }

  fix_phase(ep.right);
  Complex overlap = ep.left.dot(ep.right);
  if (std::abs(overlap) < 1e-12) {
    throw ConvergenceFailure("dominant_eigenpair: left/right eigenvectors orthogonal");
  }
  ep.left /= std::conj(overlap);  // <left|right> = 1
  return ep;
}

void canonicalize(MpsState& s) {
  s.site_tensor = build_site_tensors(s);
  TransferMatrix t{ComplexMatrix()};
  t.matrix = (kron(s.site_tensor[0][0].conjugate(), s.site_tensor[0][0]) +
              kron(s.site_tensor[0][1].conjugate(), s.site_tensor[0][1])) *
             (kron(s.site_tensor[1][0].conjugate(), s.site_tensor[1][0]) +
              kron(s.site_tensor[1][1].conjugate(), s.site_tensor[1][1]));

  DominantEigenpair ep;
  try {
    ep = dominant_eigenpair(t);
  } catch (const DegenerateDominantEigenvalue&) {
    // Symmetry-broken or block degeneracy: select the branch closest to the
    // quasi-canonical environment diag(lambda) on the boundary bond.
    const Eigen::VectorXd& l = s.lambda[1];
    ComplexMatrix guess = ComplexMatrix::Zero(l.size(), l.size());
    for (Eigen::Index i = 0; i < l.size(); ++i) guess(i, i) = l(i);
    ComplexVector prev = vec(guess);
    prev.normalize();
    ep = dominant_eigenpair(t, &prev);
  }

  const double scale = std::pow(std::abs(ep.lambda), 0.25);
  for (int site = 0; site < 2; ++site)
    for (int p = 0; p < 2; ++p) {
      s.gamma[site][p] /= scale;
      s.site_tensor[site][p] /= scale;
    }

  const int d1 = s.bond_dim(1);
  ComplexMatrix r0 = unvec(ep.right, d1, d1);
  ComplexMatrix l0 = unvec(ep.left, d1, d1).adjoint();
  // The dominant environments of a completely positive transfer map are
  // Hermitian up to a global phase; fix the phase and hermitize.
  auto hermitize = [](ComplexMatrix& m) {
    Complex tr = m.trace();
    if (std::abs(tr) > 1e-14) m *= std::conj(tr) / std::abs(tr);
    m = 0.5 * (m + m.adjoint()).eval();
  };
  hermitize(r0);
  hermitize(l0);
  Complex norm = (l0 * r0).trace();
  r0 /= norm;

  ComplexMatrix l1 = s.site_tensor[0][0].adjoint() * l0 * s.site_tensor[0][0] +
                     s.site_tensor[0][1].adjoint() * l0 * s.site_tensor[0][1];
  ComplexMatrix r1 = s.site_tensor[1][0] * r0 * s.site_tensor[1][0].adjoint() +
                     s.site_tensor[1][1] * r0 * s.site_tensor[1][1].adjoint();
  r1 /= (l1 * r1).trace();

  s.env_left = {l0, l1};
  s.env_right = {r0, r1};
  s.canonical = true;
}

ReducedDensityMatrix reduced_density_matrix_at(const MpsState& s, int n, int offset) {
  if (!s.canonical) throw NotCanonicalized("reduced_density_matrix: canonicalize first");
  if (n < 1 || n > 12) throw ResourceLimit("reduced_density_matrix: n must be in [1, 12]");
  if (offset != 0 && offset != 1) throw IndexOutOfRange("offset must be 0 or 1");

  const int h1 = n / 2;
  const int h2 = n - h1;
  const auto& a = s.site_tensor;

  // Left pass: Y' = A_j^dagger Y A_i, string index packs (i, j) pairs with
  // site 0 most significant.
  std::vector<ComplexMatrix> left(1, s.env_left[offset]);
  for (int k = 0; k < h1; ++k) {
    const int parity = (offset + k) % 2;
    std::vector<ComplexMatrix> next(left.size() * 4);
    for (size_t idx = 0; idx < left.size(); ++idx)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          next[idx * 4 + (2 * i + j)] = a[parity][j].adjoint() * left[idx] * a[parity][i];
    left = std::move(next);
  }

  // Right pass: X' = A_i X A_j^dagger.
  const int end_parity = (offset + n) % 2;
  std::vector<ComplexMatrix> right(1, s.env_right[end_parity]);
  for (int k = n - 1; k >= h1; --k) {
    const int parity = (offset + k) % 2;
    std::vector<ComplexMatrix> next(right.size() * 4);
    const size_t stride = right.size();
    for (size_t idx = 0; idx < right.size(); ++idx)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          next[(2 * i + j) * stride + idx] = a[parity][i] * right[idx] * a[parity][j].adjoint();
    right = std::move(next);
  }

  const Eigen::Index chi_mid = left[0].cols();
  Eigen::MatrixXcd yf(left.size(), chi_mid * chi_mid);
  for (size_t idx = 0; idx < left.size(); ++idx) {
    ComplexMatrix yt = left[idx].transpose();
    yf.row(idx) = Eigen::Map<const ComplexVector>(yt.data(), yt.size()).transpose();
  }
  Eigen::MatrixXcd xf(chi_mid * chi_mid, right.size());
  for (size_t idx = 0; idx < right.size(); ++idx) {
    xf.col(idx) = Eigen::Map<const ComplexVector>(right[idx].data(), right[idx].size());
  }
  Eigen::MatrixXcd p = yf * xf;  // Tr(Y X) for every (left, right) string pair

  const int dim = 1 << n;
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  for (size_t sl = 0; sl < left.size(); ++sl) {
    int il = 0, jl = 0;
    for (int k = 0; k < h1; ++k) {
      const int pair = (static_cast<int>(sl) >> (2 * (h1 - 1 - k))) & 3;
      il = (il << 1) | (pair >> 1);
      jl = (jl << 1) | (pair & 1);
    }
    for (size_t sr = 0; sr < right.size(); ++sr) {
      int ir = 0, jr = 0;
      for (int k = 0; k < h2; ++k) {
        const int pair = (static_cast<int>(sr) >> (2 * (h2 - 1 - k))) & 3;
        ir = (ir << 1) | (pair >> 1);
        jr = (jr << 1) | (pair & 1);
      }
      rho((il << h2) | ir, (jl << h2) | jr) = p(sl, sr);
    }
  }

  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return {n, rho};
}

ReducedDensityMatrix reduced_density_matrix(const MpsState& s, int n) {
  ReducedDensityMatrix r0 = reduced_density_matrix_at(s, n, 0);
  ReducedDensityMatrix r1 = reduced_density_matrix_at(s, n, 1);
  ComplexMatrix rho = 0.5 * (r0.matrix + r1.matrix);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return {n, rho};
}

double expectation_local(const MpsState& s, const ComplexMatrix& op,
                         SiteParity start_site_parity) {
  int k = 0;
  while ((Eigen::Index(1) << k) < op.rows()) ++k;
  if ((Eigen::Index(1) << k) != op.rows() || op.rows() != op.cols() || k < 1) {
    throw DimensionMismatch("expectation_local: operator must be 2^k x 2^k");
  }
  if (k > 4) throw ResourceLimit("expectation_local: operator support limited to 4 sites");
  require_hermitian(op, "expectation_local");
  const int offset = (start_site_parity == SiteParity::even) ? 0 : 1;
  ReducedDensityMatrix rho = reduced_density_matrix_at(s, k, offset);
  Complex value = (rho.matrix * op).trace();
  return value.real();
}

namespace {
constexpr char kMagic[8] = {'M', 'P', 'S', 'C', 'H', 'K', '1', '\0'};

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
}

void write_matrix(std::ofstream& out, const ComplexMatrix& m) {
  const int32_t rows = static_cast<int32_t>(m.rows());
  const int32_t cols = static_cast<int32_t>(m.cols());
  write_pod(out, rows);
  write_pod(out, cols);
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(Complex) * m.size()));
}

ComplexMatrix read_matrix(std::ifstream& in) {
  int32_t rows = 0, cols = 0;
  read_pod(in, rows);
  read_pod(in, cols);
  if (rows < 0 || cols < 0 || rows > (1 << 20) || cols > (1 << 20)) {
    throw IoError("checkpoint: corrupt matrix header");
  }
  ComplexMatrix m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(Complex) * m.size()));
  return m;
}
}  // namespace

void save_checkpoint(const MpsState& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, s.delta);
  write_pod(out, s.seed);
  const uint8_t converged = s.converged ? 1 : 0;
  write_pod(out, converged);
  for (int bond = 0; bond < 2; ++bond) {
    const int32_t len = static_cast<int32_t>(s.lambda[bond].size());
    write_pod(out, len);
    out.write(reinterpret_cast<const char*>(s.lambda[bond].data()),
              static_cast<std::streamsize>(sizeof(double) * len));
  }
  for (int site = 0; site < 2; ++site)
    for (int p = 0; p < 2; ++p) write_matrix(out, s.gamma[site][p]);
  if (!out) throw IoError("checkpoint write failed: " + path);
}

MpsState load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError("not an MPSCHK1 checkpoint: " + path);
  }
  MpsState s;
  read_pod(in, s.delta);
  read_pod(in, s.seed);
  uint8_t converged = 0;
  read_pod(in, converged);
  s.converged = converged != 0;
  for (int bond = 0; bond < 2; ++bond) {
    int32_t len = 0;
    read_pod(in, len);
    if (len < 1 || len > (1 << 20)) throw IoError("checkpoint: corrupt bond length");
    s.lambda[bond].resize(len);
    in.read(reinterpret_cast<char*>(s.lambda[bond].data()),
            static_cast<std::streamsize>(sizeof(double) * len));
  }
  for (int site = 0; site < 2; ++site)
    for (int p = 0; p < 2; ++p) s.gamma[site][p] = read_matrix(in);
  if (!in) throw IoError("checkpoint truncated: " + path);
  canonicalize(s);
  return s;
}

}  // namespace xxzbell
