#pragma once

#include "xxzbell/bell.hpp"
#include "xxzbell/itebd.hpp"

namespace xxzbell {

struct StateVector {
  int n_sites = 0;
  ComplexVector amplitudes;  // 2^n_sites, site 0 is the most significant bit
};

/// Lowest eigenpair of the N-site periodic XXZ chain (2 <= N <= 16), by
/// Lanczos with full reorthogonalization. Note the N=2 periodic convention
/// double-counts the single bond: H = 2 h_{01}.
std::pair<double, StateVector> exact_ground_state(int N, XxzCoupling c);

/// Partial trace onto n contiguous sites starting at first_site.
ReducedDensityMatrix rdm_from_statevector(const StateVector& state, int first_site, int n);

StateVector ghz_state(int n);
StateVector bell_singlet();

/// Explicit expansion of M_n over the 2^n correlator strings obtained by
/// unfolding the MK recursion symbolically (n <= 4); oracle for mk_operators.
ComplexMatrix mk_bruteforce(const MeasurementFrame& frame);

}  // namespace xxzbell
