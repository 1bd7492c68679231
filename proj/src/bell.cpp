#include "xxzbell/bell.hpp"

#include <cmath>

namespace xxzbell {

void MeasurementFrame::validate() const {
  if (n < 1 || static_cast<int>(a.size()) != n || static_cast<int>(a_prime.size()) != n) {
    throw DimensionMismatch("MeasurementFrame: need n vectors in both a and a_prime");
  }
  auto check = [](const UnitVector3& v) {
    const double norm2 = v.x * v.x + v.y * v.y + v.z * v.z;
    if (std::abs(norm2 - 1.0) > 2e-9) {
      throw NonUnitVector("MeasurementFrame: vector norm^2 " + std::to_string(norm2));
    }
  };
  for (const auto& v : a) check(v);
  for (const auto& v : a_prime) check(v);
}

BellOperatorPair mk_operators(const MeasurementFrame& frame) {
  frame.validate();
  ComplexMatrix m = direction_operator(frame.a[0]);
  ComplexMatrix mp = direction_operator(frame.a_prime[0]);
  for (int k = 1; k < frame.n; ++k) {
    const auto& u = frame.a[k];
    const auto& v = frame.a_prime[k];
    const ComplexMatrix sum_op = pauli_combination(u.x + v.x, u.y + v.y, u.z + v.z);
    const ComplexMatrix diff_op = pauli_combination(u.x - v.x, u.y - v.y, u.z - v.z);
    ComplexMatrix next_m = 0.5 * (kron(m, sum_op) + kron(mp, diff_op));
    ComplexMatrix next_mp = 0.5 * (kron(mp, sum_op) - kron(m, diff_op));
    m = std::move(next_m);
    mp = std::move(next_mp);
  }
  return {frame.n, std::move(m), std::move(mp)};
}

ComplexMatrix svetlichny_operator(const BellOperatorPair& pair) {
  return (pair.m + pair.m_prime) / std::sqrt(2.0);
}

namespace {

double traced_expectation(const ReducedDensityMatrix& rho, const ComplexMatrix& op,
                          const char* what) {
  if (rho.matrix.rows() != op.rows()) {
    throw DimensionMismatch(std::string(what) + ": rho and operator dimensions differ");
  }
  const Complex value = (rho.matrix * op).trace();
  if (std::abs(value.imag()) > 1e-9) {
    throw ConvergenceFailure(std::string(what) + ": imaginary residue " +
                             std::to_string(value.imag()));
  }
  return value.real();
}

}  // namespace

double mermin_value(const ReducedDensityMatrix& rho, const MeasurementFrame& frame) {
  if (rho.n != frame.n) throw DimensionMismatch("mermin_value: rho.n != frame.n");
  return traced_expectation(rho, mk_operators(frame).m, "mermin_value");
}

double svetlichny_value(const ReducedDensityMatrix& rho, const MeasurementFrame& frame) {
  if (rho.n != frame.n) throw DimensionMismatch("svetlichny_value: rho.n != frame.n");
  return traced_expectation(rho, svetlichny_operator(mk_operators(frame)), "svetlichny_value");
}

namespace {

// Left-moving environment update with a single-site operator o inserted:
// Y -> sum_{i,j} o(j,i) A_j^dagger Y A_i.
ComplexMatrix lift(const std::array<ComplexMatrix, 2>& a, const ComplexMatrix& o,
                   const std::array<ComplexMatrix, 2>& ya) {
  // ya[i] = Y * A_i, precomputed by the caller.
  ComplexMatrix q0 = o(0, 0) * ya[0] + o(0, 1) * ya[1];
  ComplexMatrix q1 = o(1, 0) * ya[0] + o(1, 1) * ya[1];
  return a[0].adjoint() * q0 + a[1].adjoint() * q1;
}

std::pair<Complex, Complex> mk_pair_offset(const MpsState& s, const MeasurementFrame& frame,
                                           int offset) {
  ComplexMatrix ym, yp;
  for (int k = 0; k < frame.n; ++k) {
    const auto& a = s.site_tensor[(offset + k) % 2];
    if (k == 0) {
      const ComplexMatrix& l = s.env_left[offset];
      const std::array<ComplexMatrix, 2> la = {l * a[0], l * a[1]};
      ym = lift(a, direction_operator(frame.a[0]), la);
      yp = lift(a, direction_operator(frame.a_prime[0]), la);
      continue;
    }
    const auto& u = frame.a[k];
    const auto& v = frame.a_prime[k];
    const ComplexMatrix sum_op = 0.5 * pauli_combination(u.x + v.x, u.y + v.y, u.z + v.z);
    const ComplexMatrix diff_op = 0.5 * pauli_combination(u.x - v.x, u.y - v.y, u.z - v.z);
    const std::array<ComplexMatrix, 2> ma = {ym * a[0], ym * a[1]};
    const std::array<ComplexMatrix, 2> pa = {yp * a[0], yp * a[1]};
    ComplexMatrix next_m = lift(a, sum_op, ma) + lift(a, diff_op, pa);
    ComplexMatrix next_p = lift(a, sum_op, pa) - lift(a, diff_op, ma);
    ym = std::move(next_m);
    yp = std::move(next_p);
  }
  const ComplexMatrix& r = s.env_right[(offset + frame.n) % 2];
  return {(ym * r).trace(), (yp * r).trace()};
}

}  // namespace

std::pair<double, double> mk_expectation_mps(const MpsState& state,
                                             const MeasurementFrame& frame) {
  if (!state.canonical) throw NotCanonicalized("mk_expectation_mps: canonicalize first");
  if (frame.n > 12) throw ResourceLimit("mk_expectation_mps: n must be <= 12");
  frame.validate();
  const auto [m0, p0] = mk_pair_offset(state, frame, 0);
  const auto [m1, p1] = mk_pair_offset(state, frame, 1);
  const Complex m = 0.5 * (m0 + m1);
  const Complex p = 0.5 * (p0 + p1);
  if (std::abs(m.imag()) > 1e-9 || std::abs(p.imag()) > 1e-9) {
    throw ConvergenceFailure("mk_expectation_mps: imaginary residue exceeds 1e-9");
  }
  return {m.real(), p.real()};
}

}  // namespace xxzbell
