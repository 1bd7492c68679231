#include "xxzbell/itebd.hpp"

#include <cmath>

namespace xxzbell {

namespace {

Eigen::VectorXd pseudo_inverse(const Eigen::VectorXd& w) {
  const double cutoff = 1e-12 * w.maxCoeff();
  Eigen::VectorXd inv(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) inv(i) = (w(i) > cutoff) ? 1.0 / w(i) : 0.0;
  return inv;
}

// Two-site blocks M_pq = lo . Gamma_L_p . lm . Gamma_R_q . lo for the bond,
// assuming (quasi-)canonical weights on the outer bonds.
std::array<ComplexMatrix, 4> two_site_blocks(const MpsState& s, Bond bond) {
  const int left_site = (bond == Bond::even) ? 0 : 1;
  const int mid_bond = (bond == Bond::even) ? 0 : 1;
  const int outer_bond = 1 - mid_bond;
  const auto& lo = s.lambda[outer_bond];
  const auto& lm = s.lambda[mid_bond];
  std::array<ComplexMatrix, 4> m;
  for (int p = 0; p < 2; ++p) {
    ComplexMatrix lhs = lo.asDiagonal() * s.gamma[left_site][p] * lm.asDiagonal();
    for (int q = 0; q < 2; ++q) {
      m[2 * p + q] = lhs * s.gamma[1 - left_site][q] * lo.asDiagonal();
    }
  }
  return m;
}

double bond_energy_estimate(const MpsState& s, const ComplexMatrix& h, Bond bond) {
  const auto m = two_site_blocks(s, bond);
  Complex num(0, 0);
  double den = 0.0;
  for (int r = 0; r < 4; ++r) {
    den += m[r].squaredNorm();
    for (int c = 0; c < 4; ++c) {
      if (h(r, c) != Complex(0, 0)) {
        num += h(r, c) * (m[r].adjoint() * m[c]).trace();
      }
    }
  }
  return num.real() / den;
}

}  // namespace

EvolutionSchedule default_schedule() {
  return {{0.1, 20000, 1e-10},
          {0.05, 20000, 1e-10},
          {0.01, 20000, 1e-10},
          {1e-3, 20000, 1e-10},
          {1e-4, 20000, 1e-10}};
}

ComplexMatrix two_site_hamiltonian(XxzCoupling c) {
  const ComplexMatrix sx = pauli(Axis::x), sy = pauli(Axis::y), sz = pauli(Axis::z);
  return kron(sx, sx) + kron(sy, sy) + c.delta * kron(sz, sz);
}

ComplexMatrix trotter_gate(XxzCoupling c, double tau) {
  return hermitian_exp(two_site_hamiltonian(c), -tau);
}

double apply_gate(MpsState& s, const ComplexMatrix& gate, Bond bond, int d_max) {
  if (gate.rows() != 4 || gate.cols() != 4) {
    throw DimensionMismatch("apply_gate: gate must be 4x4");
  }
  if (d_max < 1) throw DimensionMismatch("apply_gate: d_max must be >= 1");

  const int left_site = (bond == Bond::even) ? 0 : 1;
  const int mid_bond = (bond == Bond::even) ? 0 : 1;
  const int outer_bond = 1 - mid_bond;
  const auto m = two_site_blocks(s, bond);
  const Eigen::Index chi = m[0].rows();

  ComplexMatrix theta = ComplexMatrix::Zero(2 * chi, 2 * chi);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      ComplexMatrix block = ComplexMatrix::Zero(chi, chi);
      for (int r = 0; r < 4; ++r) {
        if (gate(2 * p + q, r) != Complex(0, 0)) block += gate(2 * p + q, r) * m[r];
      }
      theta.block(p * chi, q * chi, chi, chi) = block;
    }

  SvdResult dec = svd(theta);
  const Eigen::VectorXd& sv = dec.singular_values;
  const double total = sv.squaredNorm();
  if (total <= 0.0) throw SvdFailure("apply_gate: zero two-site tensor");

  Eigen::Index keep = std::min<Eigen::Index>(d_max, sv.size());
  while (keep > 1 && sv(keep - 1) < 1e-12 * sv(0)) --keep;
  double discarded = 0.0;
  for (Eigen::Index i = keep; i < sv.size(); ++i) discarded += sv(i) * sv(i);
  const double trunc_error = discarded / total;

  Eigen::VectorXd new_mid = sv.head(keep) / sv.head(keep).norm();
  const Eigen::VectorXd lo_inv = pseudo_inverse(s.lambda[outer_bond]);

  for (int p = 0; p < 2; ++p) {
    s.gamma[left_site][p] = lo_inv.asDiagonal() * dec.u.block(p * chi, 0, chi, keep);
    s.gamma[1 - left_site][p] = dec.vh.block(0, p * chi, keep, chi) * lo_inv.asDiagonal();
  }
  s.lambda[mid_bond] = new_mid;
  s.invalidate();
  return trunc_error;
}

std::pair<MpsState, ConvergenceReport> ground_state_from(MpsState state, XxzCoupling c,
                                                         int D,
                                                         const EvolutionSchedule& schedule) {
  const ComplexMatrix h = two_site_hamiltonian(c);
  ConvergenceReport report;
  report.seed = state.seed;
  bool last_stage_converged = true;

  for (const auto& stage : schedule) {
    const ComplexMatrix half_gate = trotter_gate(c, stage.tau / 2.0);
    const ComplexMatrix full_gate = trotter_gate(c, stage.tau);
    double prev_energy = 0.0;
    bool have_prev = false;
    bool stage_converged = false;
    int steps = 0;
    for (; steps < stage.max_steps; ++steps) {
      double err = apply_gate(state, half_gate, Bond::even, D);
      report.truncation_error_max = std::max(report.truncation_error_max, err);
      err = apply_gate(state, full_gate, Bond::odd, D);
      report.truncation_error_max = std::max(report.truncation_error_max, err);
      err = apply_gate(state, half_gate, Bond::even, D);
      report.truncation_error_max = std::max(report.truncation_error_max, err);

      const double energy = 0.5 * (bond_energy_estimate(state, h, Bond::even) +
                                   bond_energy_estimate(state, h, Bond::odd));
      if (have_prev && std::abs(energy - prev_energy) <= stage.energy_tolerance) {
        ++steps;
        stage_converged = true;
        break;
      }
      prev_energy = energy;
      have_prev = true;
    }
    report.steps_taken.push_back(steps);
    last_stage_converged = stage_converged;
  }

  canonicalize(state);
  state.delta = c.delta;
  state.converged = last_stage_converged;
  report.converged = last_stage_converged;
  report.final_energy_per_site = energy_per_site(state, c);
  return {std::move(state), report};
}

// Seeded random state biased toward the Neel product configuration
// |up, down>. A fully random start occasionally relaxes into a metastable
// fixed point of the truncated update (observed at the per-mille level in the
// gapped phase); starting near the physical manifold avoids those basins
// while the seeded noise still breaks symmetry deterministically.
static MpsState biased_initial_state(int D, uint64_t seed) {
  MpsState s = random_mps(D, seed);
  for (int site = 0; site < 2; ++site) {
    for (int p = 0; p < 2; ++p) {
      s.gamma[site][p] *= 0.1;
      if (p == site) s.gamma[site][p](0, 0) += 3.0;
    }
  }
  canonicalize(s);
  return s;
}

std::pair<MpsState, ConvergenceReport> ground_state(XxzCoupling c, int D,
                                                    const EvolutionSchedule& schedule,
                                                    uint64_t seed) {
  return ground_state_from(biased_initial_state(D, seed), c, D, schedule);
}

double energy_per_site(const MpsState& state, XxzCoupling c) {
  if (!state.canonical) {
    MpsState copy = state;
    canonicalize(copy);
    return energy_per_site(copy, c);
  }
  const ComplexMatrix h = two_site_hamiltonian(c);
  const double even = expectation_local(state, h, SiteParity::even);
  const double odd = expectation_local(state, h, SiteParity::odd);
  return 0.5 * (even + odd);
}

}  // namespace xxzbell
