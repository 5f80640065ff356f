#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "lucheck/errors.hpp"

namespace lucheck {

using cplx = std::complex<double>;

// Pure state of M >= 1 parties with local dimensions d_k >= 2.  Amplitudes are
// stored as given (possibly unnormalized) in row-major order: the multi-index
// (i_1, ..., i_M) flattens with i_1 slowest and i_M fastest.
class PureState {
 public:
  PureState(std::vector<int> dims, Eigen::VectorXcd amplitudes);

  const std::vector<int>& dims() const { return dims_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  int num_parties() const { return static_cast<int>(dims_.size()); }
  Eigen::Index size() const { return amps_.size(); }
  double norm() const { return amps_.norm(); }
  PureState normalized() const;

  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

 private:
  std::vector<int> dims_;
  Eigen::VectorXcd amps_;
  std::string label_;
};

// Tuple (U_1, ..., U_M) of local unitaries, one d_k x d_k matrix per party.
// The constructor enforces max-norm(U'U - I) <= eps_unitary for each party.
class LocalUnitaryTuple {
 public:
  explicit LocalUnitaryTuple(std::vector<Eigen::MatrixXcd> factors,
                             double eps_unitary = 1e-10);

  const std::vector<Eigen::MatrixXcd>& factors() const { return factors_; }
  const Eigen::MatrixXcd& factor(int k) const;
  int num_parties() const { return static_cast<int>(factors_.size()); }
  std::vector<int> dims() const;

  // Party-wise adjoint; the inverse tuple.
  LocalUnitaryTuple inverse() const;

  // Party-wise product (this_k * other_k), i.e. "apply other first, then this".
  LocalUnitaryTuple compose(const LocalUnitaryTuple& other) const;

 private:
  std::vector<Eigen::MatrixXcd> factors_;
};

// <v|w> with the physics convention: conjugate-linear in the first argument.
cplx inner(const PureState& v, const PureState& w);

// (U_1 x ... x U_M) |v>.
PureState apply_tuple(const PureState& v, const LocalUnitaryTuple& u);

// Applies an arbitrary d_k x d_k matrix on party k only (no unitarity
// requirement); used for algebra elements and partial contractions.
Eigen::VectorXcd apply_on_party(const std::vector<int>& dims,
                                const Eigen::VectorXcd& amps, int k,
                                const Eigen::MatrixXcd& op);

// True iff v and w lie on the same projective ray up to tol:
// |<v|w>| >= (1 - tol) * |v| * |w|, evaluated in squared form so that the
// comparison is exact for bitwise-identical rays at tol = 0.
bool projective_equal(const PureState& v, const PureState& w, double tol);

// Named constructions.
PureState ghz_state(int parties, int level_count);       // sum_i |i...i> / sqrt(d)
PureState w_state(int parties);                          // qubit W state
PureState basis_product_state(const std::vector<int>& dims);  // |0...0>

// Standard-complex-Gaussian amplitudes (unnormalized), deterministic per seed.
PureState random_haar_state(const std::vector<int>& dims, std::uint64_t seed);

// Haar-distributed d x d unitary, deterministic per seed.
Eigen::MatrixXcd random_local_unitary(int d, std::uint64_t seed);

// One independent Haar factor per party, deterministic per seed.
LocalUnitaryTuple random_local_unitary_tuple(const std::vector<int>& dims,
                                             std::uint64_t seed);

namespace detail {
// Left/right index strides around party k for row-major flattening.
void axis_extents(const std::vector<int>& dims, int k, Eigen::Index& left,
                  Eigen::Index& d, Eigen::Index& right);
void check_same_dims(const PureState& v, const PureState& w);
}  // namespace detail

}  // namespace lucheck
