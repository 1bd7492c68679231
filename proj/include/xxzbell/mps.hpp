#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "xxzbell/linalg.hpp"

namespace xxzbell {

enum class Spin { up, down };

/// Infinite translationally invariant MPS in Vidal form with a two-site
/// unit cell. gamma[s][p] is the Gamma tensor of cell site s (s = 0, 1)
/// at physical index p (p = 0 is spin up). lambda[0] sits on the bond
/// between sites 0 and 1, lambda[1] on the cell boundary (site 1 -> next
/// site 0). Gammas may be rectangular while bond dimensions differ.
struct MpsState {
  std::array<std::array<ComplexMatrix, 2>, 2> gamma;
  std::array<Eigen::VectorXd, 2> lambda;

  double delta = 0.0;    // coupling the state was converged at (metadata)
  uint64_t seed = 0;     // seed of the initial state (metadata)
  bool converged = false;

  // Filled by canonicalize().
  bool canonical = false;
  // Center-gauged site tensors a[s][p] = sqrt(lambda_left) Gamma sqrt(lambda_right).
  std::array<std::array<ComplexMatrix, 2>, 2> site_tensor;
  // Dominant transfer environments. Index 0: on the cell boundary bond
  // (left of site 0); index 1: on the internal bond (left of site 1).
  std::array<ComplexMatrix, 2> env_left;
  std::array<ComplexMatrix, 2> env_right;

  int bond_dim(int bond) const { return static_cast<int>(lambda[bond].size()); }
  int max_bond_dim() const { return std::max(bond_dim(0), bond_dim(1)); }

  void invalidate() { canonical = false; }
};

struct TransferMatrix {
  ComplexMatrix matrix;  // D^2 x D^2, full unit cell
};

struct ReducedDensityMatrix {
  int n = 0;
  ComplexMatrix matrix;  // 2^n x 2^n
};

struct DominantEigenpair {
  Complex lambda;
  ComplexVector left;   // <left| T = lambda <left|
  ComplexVector right;  // T |right> = lambda |right>, <left|right> = 1
};

MpsState product_mps(Spin spin);

/// Reproducible random state with real entries; same seed gives bitwise
/// identical tensors.
MpsState random_mps(int D, uint64_t seed);

/// Normalizes the state (dominant transfer eigenvalue scaled to 1) and
/// caches the center-gauged tensors and the fixed-point environments.
void canonicalize(MpsState& state);

TransferMatrix transfer_matrix(const MpsState& state);

/// Power iteration, tolerance 1e-12, restart on stagnation. Throws
/// DegenerateDominantEigenvalue when the two largest moduli are closer
/// than 1e-10 and no previous fixed point is supplied for the tie-break.
DominantEigenpair dominant_eigenpair(const TransferMatrix& t,
                                     const ComplexVector* previous_right = nullptr);

/// n-site RDM, averaged over the two unit-cell offsets, symmetrized and
/// trace-normalized. Requires a canonicalized state; n <= 12.
ReducedDensityMatrix reduced_density_matrix(const MpsState& state, int n);

/// Single-offset extraction (offset = index of the first site in the cell).
ReducedDensityMatrix reduced_density_matrix_at(const MpsState& state, int n, int offset);

enum class SiteParity { even, odd };

/// Expectation of a Hermitian operator on k consecutive sites (k <= 4)
/// starting at the given unit-cell offset.
double expectation_local(const MpsState& state, const ComplexMatrix& op,
                         SiteParity start_site_parity);

/// Checkpoint I/O, magic header "MPSCHK1". Round-trip identity on all
/// tensors and metadata.
void save_checkpoint(const MpsState& state, const std::string& path);
MpsState load_checkpoint(const std::string& path);

}  // namespace xxzbell
