#include "xxzbell/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace xxzbell {

namespace {
constexpr double kUnitTol = 1e-9;
}

UnitVector3::UnitVector3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
  const double norm = std::sqrt(x * x + y * y + z * z);
  if (std::abs(norm - 1.0) > kUnitTol) {
    throw NonUnitVector("vector norm " + std::to_string(norm) + " is not 1");
  }
}

UnitVector3 UnitVector3::from_angles(double theta, double phi) {
  UnitVector3 v;
  v.x = std::sin(theta) * std::cos(phi);
  v.y = std::sin(theta) * std::sin(phi);
  v.z = std::cos(theta);
  return v;
}

double UnitVector3::theta() const { return std::acos(std::clamp(z, -1.0, 1.0)); }

double UnitVector3::phi() const {
  if (std::abs(x) < 1e-300 && std::abs(y) < 1e-300) return 0.0;
  return std::atan2(y, x);
}

ComplexMatrix pauli(Axis axis) {
  ComplexMatrix m(2, 2);
  const Complex i(0.0, 1.0);
  switch (axis) {
    case Axis::x:
      m << 0, 1, 1, 0;
      break;
    case Axis::y:
      m << 0, -i, i, 0;
      break;
    case Axis::z:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

ComplexMatrix pauli_combination(double x, double y, double z) {
  ComplexMatrix m(2, 2);
  m << Complex(z, 0), Complex(x, -y), Complex(x, y), Complex(-z, 0);
  return m;
}

ComplexMatrix direction_operator(const UnitVector3& a) {
  const double norm = std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z);
  if (std::abs(norm - 1.0) > kUnitTol) {
    throw NonUnitVector("direction_operator: norm " + std::to_string(norm));
  }
  return pauli_combination(a.x, a.y, a.z);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void require_hermitian(const ComplexMatrix& a, const char* what, double tol) {
  if (!is_hermitian(a, tol)) {
    throw NotHermitian(std::string(what) + ": matrix is not Hermitian");
  }
}

std::pair<Eigen::VectorXd, ComplexMatrix> hermitian_eig(const ComplexMatrix& a) {
  require_hermitian(a, "hermitian_eig");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("hermitian_eig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix hermitian_exp(const ComplexMatrix& a, double s) {
  auto [w, v] = hermitian_eig(a);
  Eigen::VectorXd ew = (s * w.array()).exp();
  return v * ew.asDiagonal() * v.adjoint();
}

SvdResult svd(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) {
    throw SvdFailure("svd: decomposition did not converge");
  }
  return {solver.matrixU(), solver.singularValues(), solver.matrixV().adjoint()};
}

}  // namespace xxzbell
