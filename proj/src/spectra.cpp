#include "lucheck/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace lucheck {

Eigen::MatrixXcd reduced_matrix(const PureState& v, int k) {
  Eigen::Index left, d, right;
  detail::axis_extents(v.dims(), k, left, d, right);
  const Eigen::VectorXcd& a = v.amplitudes();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index l = 0; l < left; ++l) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const cplx* row_i = a.data() + (l * d + i) * right;
      for (Eigen::Index j = i; j < d; ++j) {
        const cplx* row_j = a.data() + (l * d + j) * right;
        cplx acc(0.0, 0.0);
        for (Eigen::Index r = 0; r < right; ++r)
          acc += std::conj(row_i[r]) * row_j[r];
        c(i, j) += acc;
      }
    }
  }
  // Fill the lower triangle from the Hermitian upper half.
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < i; ++j) c(i, j) = std::conj(c(j, i));
  return c;
}

SpectralData spectral_data(const PureState& v, int k, double eps_gap) {
  if (eps_gap < 0.0) fail(errc::config_invalid, "eigenvalue gap must be >= 0");
  Eigen::MatrixXcd c = reduced_matrix(v, k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c);
  if (es.info() != Eigen::Success)
    fail(errc::eigensolver_failure, "reduced-matrix eigendecomposition failed");

  SpectralData data;
  data.party = k;
  // Eigen sorts ascending; flip to descending eigenvalues and matching columns.
  data.eigenvalues = es.eigenvalues().reverse();
  data.diagonalizer = es.eigenvectors().rowwise().reverse();

  // Single-linkage clustering: an adjacent gap above eps_gap starts a cluster.
  const Eigen::VectorXd& ev = data.eigenvalues;
  int start = 0;
  for (int i = 1; i <= ev.size(); ++i) {
    if (i == ev.size() || ev[i - 1] - ev[i] > eps_gap) {
      Cluster cl;
      cl.multiplicity = i - start;
      cl.value = ev.segment(start, cl.multiplicity).mean();
      data.clusters.push_back(cl);
      start = i;
    }
  }
  return data;
}

CanonicalForm canonicalize(const PureState& v, double eps_gap) {
  // Diagonalizing V'C_k V = D descending and applying T_k = V^T per party
  // turns every reduced matrix into conj(T) C T^T = V' C V = D.  Spectra and
  // clusters are taken on the normalized state so the gap threshold is
  // scale-invariant; the output state keeps the caller's normalization.
  PureState vn = v.normalized();
  std::vector<Eigen::MatrixXcd> factors;
  factors.reserve(static_cast<std::size_t>(v.num_parties()));
  for (int k = 0; k < v.num_parties(); ++k) {
    SpectralData data = spectral_data(vn, k, eps_gap);
    factors.push_back(data.diagonalizer.transpose());
  }
  LocalUnitaryTuple transform(std::move(factors));
  PureState rotated = apply_tuple(v, transform);

  std::vector<SpectralData> spectra;
  spectra.reserve(static_cast<std::size_t>(v.num_parties()));
  PureState rn = rotated.normalized();
  for (int k = 0; k < v.num_parties(); ++k)
    spectra.push_back(spectral_data(rn, k, eps_gap));
  return CanonicalForm{std::move(rotated), std::move(spectra), std::move(transform)};
}

std::vector<bool> spectra_match(const PureState& v, const PureState& w,
                                double eps_spec) {
  detail::check_same_dims(v, w);
  PureState vn = v.normalized();
  PureState wn = w.normalized();
  std::vector<bool> match;
  match.reserve(static_cast<std::size_t>(v.num_parties()));
  for (int k = 0; k < v.num_parties(); ++k) {
    Eigen::VectorXd sv = spectral_data(vn, k, 0.0).eigenvalues;
    Eigen::VectorXd sw = spectral_data(wn, k, 0.0).eigenvalues;
    match.push_back((sv - sw).cwiseAbs().maxCoeff() <= eps_spec);
  }
  return match;
}

bool locally_indistinguishable(const PureState& v, const PureState& w,
                               double eps) {
  detail::check_same_dims(v, w);
  PureState vn = v.normalized();
  PureState wn = w.normalized();
  for (int k = 0; k < v.num_parties(); ++k) {
    Eigen::MatrixXcd diff = reduced_matrix(vn, k) - reduced_matrix(wn, k);
    if (diff.cwiseAbs().maxCoeff() > eps) return false;
  }
  return true;
}

std::vector<Eigen::MatrixXcd> moment_image(const PureState& v) {
  PureState vn = v.normalized();
  std::vector<Eigen::MatrixXcd> components;
  components.reserve(static_cast<std::size_t>(v.num_parties()));
  for (int k = 0; k < v.num_parties(); ++k) {
    Eigen::MatrixXcd y = reduced_matrix(vn, k);
    const double d = static_cast<double>(v.dims()[static_cast<std::size_t>(k)]);
    y.diagonal().array() -= 1.0 / d;
    components.push_back(std::move(y));
  }
  return components;
}

}  // namespace lucheck
