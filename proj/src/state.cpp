#include "lucheck/state.hpp"

#include <Eigen/QR>
#include <cmath>
#include <sstream>

#include "lucheck/rng.hpp"

namespace lucheck {

namespace {

constexpr long long kMaxAmplitudes = 1LL << 24;  // dense desk-scale guard

long long checked_total_dim(const std::vector<int>& dims) {
  if (dims.empty()) fail(errc::invalid_state, "state needs at least one party");
  long long total = 1;
  for (int d : dims) {
    if (d < 2) {
      std::ostringstream os;
      os << "every local dimension must be >= 2, got " << d;
      fail(errc::invalid_state, os.str());
    }
    total *= d;
    if (total > kMaxAmplitudes)
      fail(errc::invalid_state, "total dimension exceeds the dense-state limit");
  }
  return total;
}

}  // namespace

PureState::PureState(std::vector<int> dims, Eigen::VectorXcd amplitudes)
    : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
  long long total = checked_total_dim(dims_);
  if (amps_.size() != total) {
    std::ostringstream os;
    os << "amplitude count " << amps_.size() << " does not match product of dims "
       << total;
    fail(errc::dimension_mismatch, os.str());
  }
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    if (!std::isfinite(amps_[i].real()) || !std::isfinite(amps_[i].imag()))
      fail(errc::invalid_state, "amplitudes must be finite");
  }
  if (amps_.norm() == 0.0) fail(errc::zero_state, "amplitude vector has zero norm");
}

PureState PureState::normalized() const {
  PureState copy = *this;
  copy.amps_ /= copy.amps_.norm();
  return copy;
}

LocalUnitaryTuple::LocalUnitaryTuple(std::vector<Eigen::MatrixXcd> factors,
                                     double eps_unitary)
    : factors_(std::move(factors)) {
  if (factors_.empty())
    fail(errc::invalid_state, "tuple needs at least one factor");
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    const Eigen::MatrixXcd& u = factors_[k];
    if (u.rows() != u.cols() || u.rows() < 2)
      fail(errc::shape_mismatch, "tuple factors must be square with dimension >= 2");
    Eigen::MatrixXcd gram = u.adjoint() * u;
    gram -= Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    double dev = gram.cwiseAbs().maxCoeff();
    if (!(dev <= eps_unitary)) {
      std::ostringstream os;
      os << "factor " << k << " fails unitarity: max |U'U - I| = " << dev;
      fail(errc::non_unitary_witness, os.str());
    }
  }
}

const Eigen::MatrixXcd& LocalUnitaryTuple::factor(int k) const {
  if (k < 0 || k >= num_parties())
    fail(errc::party_out_of_range, "tuple factor index out of range");
  return factors_[static_cast<std::size_t>(k)];
}

std::vector<int> LocalUnitaryTuple::dims() const {
  std::vector<int> d;
  d.reserve(factors_.size());
  for (const auto& u : factors_) d.push_back(static_cast<int>(u.rows()));
  return d;
}

LocalUnitaryTuple LocalUnitaryTuple::inverse() const {
  std::vector<Eigen::MatrixXcd> inv;
  inv.reserve(factors_.size());
  for (const auto& u : factors_) inv.push_back(u.adjoint());
  return LocalUnitaryTuple(std::move(inv));
}

LocalUnitaryTuple LocalUnitaryTuple::compose(const LocalUnitaryTuple& other) const {
  if (num_parties() != other.num_parties())
    fail(errc::dimension_mismatch, "tuple party counts differ");
  std::vector<Eigen::MatrixXcd> prod;
  prod.reserve(factors_.size());
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (factors_[k].rows() != other.factors_[k].rows())
      fail(errc::dimension_mismatch, "tuple factor dimensions differ");
    prod.push_back(factors_[k] * other.factors_[k]);
  }
  return LocalUnitaryTuple(std::move(prod));
}

namespace detail {

void axis_extents(const std::vector<int>& dims, int k, Eigen::Index& left,
                  Eigen::Index& d, Eigen::Index& right) {
  if (k < 0 || k >= static_cast<int>(dims.size()))
    fail(errc::party_out_of_range, "party index out of range");
  left = 1;
  for (int i = 0; i < k; ++i) left *= dims[static_cast<std::size_t>(i)];
  d = dims[static_cast<std::size_t>(k)];
  right = 1;
  for (std::size_t i = static_cast<std::size_t>(k) + 1; i < dims.size(); ++i)
    right *= dims[i];
}

void check_same_dims(const PureState& v, const PureState& w) {
  if (v.dims() != w.dims())
    fail(errc::dimension_mismatch, "states have different party dimensions");
}

}  // namespace detail

cplx inner(const PureState& v, const PureState& w) {
  detail::check_same_dims(v, w);
  return v.amplitudes().dot(w.amplitudes());  // conjugates the first argument
}

Eigen::VectorXcd apply_on_party(const std::vector<int>& dims,
                                const Eigen::VectorXcd& amps, int k,
                                const Eigen::MatrixXcd& op) {
  Eigen::Index left, d, right;
  detail::axis_extents(dims, k, left, d, right);
  if (op.rows() != d || op.cols() != d)
    fail(errc::shape_mismatch, "operator does not match the party dimension");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(amps.size());
  for (Eigen::Index l = 0; l < left; ++l) {
    for (Eigen::Index i = 0; i < d; ++i) {
      cplx* dst = out.data() + (l * d + i) * right;
      for (Eigen::Index j = 0; j < d; ++j) {
        const cplx coeff = op(i, j);
        if (coeff == cplx(0.0, 0.0)) continue;
        const cplx* src = amps.data() + (l * d + j) * right;
        for (Eigen::Index r = 0; r < right; ++r) dst[r] += coeff * src[r];
      }
    }
  }
  return out;
}

PureState apply_tuple(const PureState& v, const LocalUnitaryTuple& u) {
  if (u.dims() != v.dims())
    fail(errc::dimension_mismatch, "tuple does not match the state dimensions");
  Eigen::VectorXcd amps = v.amplitudes();
  for (int k = 0; k < v.num_parties(); ++k)
    amps = apply_on_party(v.dims(), amps, k, u.factor(k));
  PureState out(v.dims(), std::move(amps));
  out.set_label(v.label());
  return out;
}

bool projective_equal(const PureState& v, const PureState& w, double tol) {
  detail::check_same_dims(v, w);
  if (tol < 0.0 || tol >= 1.0)
    fail(errc::config_invalid, "projective tolerance must lie in [0, 1)");
  // Squared comparison: |<v|w>|^2 >= (1-tol)^2 <v|v> <w|w>.  All three
  // factors go through the same dot-product kernel so the reduction order is
  // identical; with that, the comparison is exact for identical vectors and
  // for power-of-two rescalings even at tol = 0 (squaredNorm uses a different
  // reduction and can be off by an ulp).
  double lhs = std::norm(v.amplitudes().dot(w.amplitudes()));
  double rhs = v.amplitudes().dot(v.amplitudes()).real() *
               w.amplitudes().dot(w.amplitudes()).real();
  return lhs >= (1.0 - tol) * (1.0 - tol) * rhs;
}

PureState ghz_state(int parties, int level_count) {
  if (parties < 1 || level_count < 2)
    fail(errc::invalid_state, "ghz needs >= 1 parties and local dimension >= 2");
  std::vector<int> dims(static_cast<std::size_t>(parties), level_count);
  long long total = checked_total_dim(dims);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(total);
  // |i...i> sits at index i * (d^{M-1} + ... + d + 1).
  long long stride = 0;
  long long power = 1;
  for (int k = 0; k < parties; ++k) {
    stride += power;
    power *= level_count;
  }
  const double coeff = 1.0 / std::sqrt(static_cast<double>(level_count));
  for (int i = 0; i < level_count; ++i) amps[i * stride] = coeff;
  return PureState(dims, std::move(amps));
}

PureState w_state(int parties) {
  if (parties < 2) fail(errc::invalid_state, "w state needs >= 2 parties");
  std::vector<int> dims(static_cast<std::size_t>(parties), 2);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(1LL << parties);
  const double coeff = 1.0 / std::sqrt(static_cast<double>(parties));
  // One excitation per party: index 2^{M-1-k} holds |0..1_k..0>.
  for (int k = 0; k < parties; ++k) amps[1LL << (parties - 1 - k)] = coeff;
  return PureState(dims, std::move(amps));
}

PureState basis_product_state(const std::vector<int>& dims) {
  long long total = checked_total_dim(dims);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(total);
  amps[0] = 1.0;
  return PureState(dims, std::move(amps));
}

PureState random_haar_state(const std::vector<int>& dims, std::uint64_t seed) {
  long long total = checked_total_dim(dims);
  Rng rng(seed);
  Eigen::VectorXcd amps(total);
  for (long long i = 0; i < total; ++i) amps[i] = rng.cgauss();
  return PureState(dims, std::move(amps));
}

namespace {

Eigen::MatrixXcd haar_unitary(int d, Rng& rng) {
  // QR of a complex Ginibre matrix; fixing the phases of the R diagonal makes
  // the distribution exactly Haar.
  Eigen::MatrixXcd z(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) z(i, j) = rng.cgauss();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::VectorXcd r_diag = qr.matrixQR().diagonal();
  for (int j = 0; j < d; ++j) {
    double m = std::abs(r_diag[j]);
    cplx phase = (m == 0.0) ? cplx(1.0, 0.0) : r_diag[j] / m;
    q.col(j) *= phase;
  }
  return q;
}

}  // namespace

Eigen::MatrixXcd random_local_unitary(int d, std::uint64_t seed) {
  if (d < 2) fail(errc::invalid_state, "local dimension must be >= 2");
  Rng rng(seed);
  return haar_unitary(d, rng);
}

LocalUnitaryTuple random_local_unitary_tuple(const std::vector<int>& dims,
                                             std::uint64_t seed) {
  checked_total_dim(dims);
  std::vector<Eigen::MatrixXcd> factors;
  factors.reserve(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) {
    Rng rng(mix_seed(seed, k));
    factors.push_back(haar_unitary(dims[k], rng));
  }
  return LocalUnitaryTuple(std::move(factors));
}

}  // namespace lucheck
