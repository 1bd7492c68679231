#pragma once

#include <utility>
#include <vector>

#include "xxzbell/mps.hpp"

namespace xxzbell {

/// 2n measurement directions (a_j, a'_j), one pair per site.
struct MeasurementFrame {
  int n = 0;
  std::vector<UnitVector3> a;
  std::vector<UnitVector3> a_prime;

  void validate() const;
};

/// Mermin-Klyshko operator pair built by the recursion
///   M_k = 1/2 M_{k-1} (x) (a_k + a'_k).sigma + 1/2 M'_{k-1} (x) (a_k - a'_k).sigma
/// with M_1 = a_1.sigma, M'_1 = a'_1.sigma.
struct BellOperatorPair {
  int n = 0;
  ComplexMatrix m;
  ComplexMatrix m_prime;
};

BellOperatorPair mk_operators(const MeasurementFrame& frame);

/// (M + M') / sqrt(2).
ComplexMatrix svetlichny_operator(const BellOperatorPair& pair);

double mermin_value(const ReducedDensityMatrix& rho, const MeasurementFrame& frame);
double svetlichny_value(const ReducedDensityMatrix& rho, const MeasurementFrame& frame);

/// Contracted evaluation of (Tr(rho_n M_n), Tr(rho_n M'_n)) directly against
/// the MPS, propagating the (M, M') environment pair site by site; averaged
/// over the two unit-cell offsets like reduced_density_matrix.
std::pair<double, double> mk_expectation_mps(const MpsState& state,
                                             const MeasurementFrame& frame);

}  // namespace xxzbell
