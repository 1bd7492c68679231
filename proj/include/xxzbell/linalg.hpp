#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "xxzbell/errors.hpp"

namespace xxzbell {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class Axis { x, y, z };

/// Direction on the Bloch sphere; construction enforces unit norm.
struct UnitVector3 {
  double x = 0.0, y = 0.0, z = 1.0;

  UnitVector3() = default;
  UnitVector3(double x_, double y_, double z_);

  /// (sin(theta)cos(phi), sin(theta)sin(phi), cos(theta))
  static UnitVector3 from_angles(double theta, double phi);

  double theta() const;
  double phi() const;
};

ComplexMatrix pauli(Axis axis);

/// x*sigma_x + y*sigma_y + z*sigma_z without any norm requirement.
ComplexMatrix pauli_combination(double x, double y, double z);

/// a . sigma for a unit vector a. Hermitian with eigenvalues +-1.
ComplexMatrix direction_operator(const UnitVector3& a);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_hermitian(const ComplexMatrix& a, double tol = 1e-9);
void require_hermitian(const ComplexMatrix& a, const char* what, double tol = 1e-9);

/// Eigenvalues ascending, A = V diag(w) V^dagger.
std::pair<Eigen::VectorXd, ComplexMatrix> hermitian_eig(const ComplexMatrix& a);

/// exp(s * A) for Hermitian A, via eigendecomposition.
ComplexMatrix hermitian_exp(const ComplexMatrix& a, double s);

struct SvdResult {
  ComplexMatrix u;
  Eigen::VectorXd singular_values;  // non-negative, descending
  ComplexMatrix vh;
};

SvdResult svd(const ComplexMatrix& a);

}  // namespace xxzbell
