#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lucheck/spectra.hpp"
#include "lucheck/state.hpp"

namespace lucheck {

// Element of the product algebra: one anti-Hermitian traceless d_k x d_k
// component per party (empty matrix = zero component).  It acts on a state as
// the sum of its components, each applied on its own party.
struct LocalOperator {
  std::vector<Eigen::MatrixXcd> comps;
};

// Basis of su(d_1) + ... + su(d_M): for each party, the antisymmetric pairs
// E_ij - E_ji, the symmetric pairs i(E_ij + E_ji), and the traceless diagonals
// i(E_ii - E_{i+1,i+1}); dimension sum_k (d_k^2 - 1).
struct AlgebraBasis {
  struct Generator {
    int party = 0;
    Eigen::MatrixXcd op;  // anti-Hermitian, traceless
  };
  std::vector<int> dims;
  std::vector<Generator> generators;

  static AlgebraBasis su_product(const std::vector<int>& dims);
  int dim() const { return static_cast<int>(generators.size()); }
};

// A |v> for a one-party generator / a sum-of-parties element.
Eigen::VectorXcd apply_generator(const PureState& v,
                                 const AlgebraBasis::Generator& g);
Eigen::VectorXcd apply_local_operator(const PureState& v,
                                      const LocalOperator& a);

// Symplectic pairing of the tangent directions induced by anti-Hermitian A, B
// at the ray of v:  -Im<Av|Bv> / <v|v>.
double symplectic_form(const PureState& v, const LocalOperator& a,
                       const LocalOperator& b);
double symplectic_form(const PureState& v, const Eigen::MatrixXcd& a_full,
                       const Eigen::MatrixXcd& b_full);

// The same pairing through the commutator: (i/2) <[A,B]v|v> / <v|v>.  Kept as
// an independent evaluation route; the two must agree to high accuracy.
double symplectic_form_commutator(const PureState& v, const LocalOperator& a,
                                  const LocalOperator& b);
double symplectic_form_commutator(const PureState& v,
                                  const Eigen::MatrixXcd& a_full,
                                  const Eigen::MatrixXcd& b_full);

// Moment-map pairing <mu(v), A> = (i/2) <v|Av> / <v|v>; real for
// anti-Hermitian A.
double moment_pairing(const PureState& v, const LocalOperator& a);
double moment_pairing(const PureState& v, const Eigen::MatrixXcd& a_full);

// Real dimension of the local-unitary orbit through the ray of v: the rank of
// the tangent vectors {A_j|v> - (<v|A_j v>/<v|v>)|v>} over the algebra basis,
// viewed as real vectors (the projection quotients out span{v, iv}).
int orbit_dimension(const PureState& v, double rank_tol);

// Dimension of the algebra stabilizer of the ray: SVD nullity of the tangent
// map, cross-checked against a rank-revealing QR of the same matrix;
// disagreement raises inconsistent_ranks.
int projective_stabilizer_dim(const PureState& v, double rank_tol);

// Dimension of the stabilizer of the moment-map value, from the degeneracy
// pattern: sum_k (sum_blocks m^2 - 1).
int moment_stabilizer_dim(const std::vector<SpectralData>& spectra);

// Dimension of the common kernel of the differentials of all moment
// components on the projective tangent space at v.  Computed directly from
// the null space of the pairing matrix against an explicit tangent basis and
// cross-checked against ambient - orbit; disagreement raises
// inconsistent_ranks.
int kernel_dimension(const PureState& v, double rank_tol);

struct DimensionsReport {
  long long ambient = 0;        // 2 * (prod d_k - 1)
  int dim_orbit = 0;            // local-unitary orbit dimension
  int dim_kernel = 0;           // common kernel of moment differentials
  int dim_stab_state = 0;       // stabilizer dimension of the ray
  int dim_stab_moment = 0;      // stabilizer dimension of the moment value
  int dim_fiber_in_orbit = 0;   // dim_stab_moment - dim_stab_state
  bool fiber_covered = false;   // dim_fiber_in_orbit == dim_kernel (sufficient
                                // condition; false does not prove the converse)
  double rank_tol = 0.0;
};

DimensionsReport dimensions_report(const PureState& v, double eps_gap,
                                   double rank_tol);

}  // namespace lucheck
