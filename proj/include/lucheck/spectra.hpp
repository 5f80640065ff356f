#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lucheck/state.hpp"

namespace lucheck {

// One spectral cluster: a group of reduced-matrix eigenvalues closer than the
// gap threshold, reported with its representative value and multiplicity.
struct Cluster {
  double value = 0.0;  // mean of the clustered eigenvalues
  int multiplicity = 0;
};

// Eigendata of one party's reduced matrix, eigenvalues sorted descending.
struct SpectralData {
  int party = 0;                   // 0-based party index
  Eigen::VectorXd eigenvalues;     // descending
  std::vector<Cluster> clusters;   // in descending-eigenvalue order
  Eigen::MatrixXcd diagonalizer;   // V with V' C V = diag(eigenvalues)
};

// Result of canonicalization: state with every reduced matrix diagonal with
// descending diagonal, the per-party spectra, and the transform that was
// applied (state = apply_tuple(input, transform)).
struct CanonicalForm {
  PureState state;
  std::vector<SpectralData> spectra;
  LocalUnitaryTuple transform;
};

// Reduced matrix of party k:
//   C_k[i][j] = sum over the other indices of conj(a[..i..]) * a[..j..].
// Hermitian and positive semidefinite with trace = |v|^2.
Eigen::MatrixXcd reduced_matrix(const PureState& v, int k);

// Eigendecomposition of C_k with single-linkage clustering: walking the
// descending eigenvalue list, a gap larger than eps_gap starts a new cluster.
SpectralData spectral_data(const PureState& v, int k, double eps_gap);

// Rotates v so every reduced matrix becomes diagonal with descending diagonal.
CanonicalForm canonicalize(const PureState& v, double eps_gap);

// Per-party spectra comparison on normalized states: entry k is true iff the
// sorted spectra of party k agree element-wise within eps_spec.
std::vector<bool> spectra_match(const PureState& v, const PureState& w,
                                double eps_spec);

// True iff every party's reduced matrix of the normalized states agrees in
// max-norm within eps: no local expectation value can tell v from w.
bool locally_indistinguishable(const PureState& v, const PureState& w,
                               double eps);

// Traceless moment-map components Y_k = C_k(v/|v|) - I/d_k, one per party.
std::vector<Eigen::MatrixXcd> moment_image(const PureState& v);

}  // namespace lucheck
