#include "lucheck/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace lucheck {

namespace {

// Dense tangent/kernel analysis is quadratic in the total dimension; keep it
// to sizes where that is instant.
constexpr Eigen::Index kMaxGeometryDim = 4096;

void check_geometry_size(const PureState& v) {
  if (v.size() > kMaxGeometryDim)
    fail(errc::invalid_state,
         "state too large for dense tangent-space analysis");
}

Eigen::VectorXcd apply_components(const std::vector<int>& dims,
                                 const Eigen::VectorXcd& amps,
                                 const std::vector<Eigen::MatrixXcd>& comps) {
  if (comps.size() != dims.size())
    fail(errc::shape_mismatch, "operator needs one component per party");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(amps.size());
  for (std::size_t k = 0; k < comps.size(); ++k) {
    if (comps[k].size() == 0) continue;  // zero component
    out += apply_on_party(dims, amps, static_cast<int>(k), comps[k]);
  }
  return out;
}

// Columns are the projected orbit tangent vectors A_j v - (<v|A_j v>/<v|v>) v
// of the normalized state, one per basis generator, stacked as [Re; Im].
Eigen::MatrixXd orbit_tangent_matrix(const PureState& v, const AlgebraBasis& basis,
                                     std::vector<Eigen::VectorXcd>* tangents) {
  const Eigen::Index n = v.size();
  Eigen::VectorXcd vn = v.amplitudes() / v.norm();
  PureState unit(v.dims(), vn);
  Eigen::MatrixXd t(2 * n, basis.dim());
  if (tangents) tangents->reserve(static_cast<std::size_t>(basis.dim()));
  for (int j = 0; j < basis.dim(); ++j) {
    Eigen::VectorXcd w = apply_generator(unit, basis.generators[static_cast<std::size_t>(j)]);
    w -= vn.dot(w) * vn;  // quotient out span{v, iv}
    t.col(j).head(n) = w.real();
    t.col(j).tail(n) = w.imag();
    if (tangents) tangents->push_back(std::move(w));
  }
  return t;
}

int rank_from_singular_values(const Eigen::VectorXd& sv, double rank_tol) {
  if (sv.size() == 0) return 0;
  double top = sv[0];
  if (top <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > rank_tol * top) ++rank;
  return rank;
}

}  // namespace

AlgebraBasis AlgebraBasis::su_product(const std::vector<int>& dims) {
  AlgebraBasis basis;
  basis.dims = dims;
  const cplx iu(0.0, 1.0);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const int d = dims[k];
    if (d < 2) fail(errc::invalid_state, "local dimension must be >= 2");
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        Eigen::MatrixXcd anti = Eigen::MatrixXcd::Zero(d, d);
        anti(i, j) = 1.0;
        anti(j, i) = -1.0;
        basis.generators.push_back({static_cast<int>(k), anti});
        Eigen::MatrixXcd sym = Eigen::MatrixXcd::Zero(d, d);
        sym(i, j) = iu;
        sym(j, i) = iu;
        basis.generators.push_back({static_cast<int>(k), sym});
      }
    for (int i = 0; i + 1 < d; ++i) {
      Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(d, d);
      diag(i, i) = iu;
      diag(i + 1, i + 1) = -iu;
      basis.generators.push_back({static_cast<int>(k), diag});
    }
  }
  return basis;
}

Eigen::VectorXcd apply_generator(const PureState& v,
                                 const AlgebraBasis::Generator& g) {
  return apply_on_party(v.dims(), v.amplitudes(), g.party, g.op);
}

Eigen::VectorXcd apply_local_operator(const PureState& v, const LocalOperator& a) {
  return apply_components(v.dims(), v.amplitudes(), a.comps);
}

double symplectic_form(const PureState& v, const LocalOperator& a,
                       const LocalOperator& b) {
  Eigen::VectorXcd av = apply_local_operator(v, a);
  Eigen::VectorXcd bv = apply_local_operator(v, b);
  return -av.dot(bv).imag() / v.amplitudes().squaredNorm();
}

double symplectic_form(const PureState& v, const Eigen::MatrixXcd& a_full,
                       const Eigen::MatrixXcd& b_full) {
  if (a_full.rows() != v.size() || a_full.cols() != v.size() ||
      b_full.rows() != v.size() || b_full.cols() != v.size())
    fail(errc::shape_mismatch, "operators must match the full dimension");
  Eigen::VectorXcd av = a_full * v.amplitudes();
  Eigen::VectorXcd bv = b_full * v.amplitudes();
  return -av.dot(bv).imag() / v.amplitudes().squaredNorm();
}

double symplectic_form_commutator(const PureState& v, const LocalOperator& a,
                                  const LocalOperator& b) {
  const std::vector<int>& dims = v.dims();
  Eigen::VectorXcd av = apply_local_operator(v, a);
  Eigen::VectorXcd bv = apply_local_operator(v, b);
  Eigen::VectorXcd abv = apply_components(dims, bv, a.comps);
  Eigen::VectorXcd bav = apply_components(dims, av, b.comps);
  cplx val = (abv - bav).dot(v.amplitudes());
  return (cplx(0.0, 0.5) * val).real() / v.amplitudes().squaredNorm();
}

double symplectic_form_commutator(const PureState& v,
                                  const Eigen::MatrixXcd& a_full,
                                  const Eigen::MatrixXcd& b_full) {
  Eigen::VectorXcd comm_v =
      a_full * (b_full * v.amplitudes()) - b_full * (a_full * v.amplitudes());
  cplx val = comm_v.dot(v.amplitudes());
  return (cplx(0.0, 0.5) * val).real() / v.amplitudes().squaredNorm();
}

double moment_pairing(const PureState& v, const LocalOperator& a) {
  Eigen::VectorXcd av = apply_local_operator(v, a);
  cplx val = v.amplitudes().dot(av);
  return (cplx(0.0, 0.5) * val).real() / v.amplitudes().squaredNorm();
}

double moment_pairing(const PureState& v, const Eigen::MatrixXcd& a_full) {
  if (a_full.rows() != v.size() || a_full.cols() != v.size())
    fail(errc::shape_mismatch, "operator must match the full dimension");
  cplx val = v.amplitudes().dot(a_full * v.amplitudes());
  return (cplx(0.0, 0.5) * val).real() / v.amplitudes().squaredNorm();
}

int orbit_dimension(const PureState& v, double rank_tol) {
  check_geometry_size(v);
  AlgebraBasis basis = AlgebraBasis::su_product(v.dims());
  Eigen::MatrixXd t = orbit_tangent_matrix(v, basis, nullptr);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(t);
  return rank_from_singular_values(svd.singularValues(), rank_tol);
}

int projective_stabilizer_dim(const PureState& v, double rank_tol) {
  check_geometry_size(v);
  AlgebraBasis basis = AlgebraBasis::su_product(v.dims());
  Eigen::MatrixXd t = orbit_tangent_matrix(v, basis, nullptr);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(t);
  int rank = rank_from_singular_values(svd.singularValues(), rank_tol);
  int nullity = basis.dim() - rank;

  // Independent route: rank-revealing QR with the same relative threshold.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(t);
  qr.setThreshold(rank_tol);
  int qr_nullity = basis.dim() - static_cast<int>(qr.rank());

  if (qr_nullity != nullity) {
    std::ostringstream os;
    os << "stabilizer nullity disagrees between routes: " << nullity << " vs "
       << qr_nullity << "; state is numerically borderline at rank_tol "
       << rank_tol;
    fail(errc::inconsistent_ranks, os.str());
  }
  return nullity;
}

int moment_stabilizer_dim(const std::vector<SpectralData>& spectra) {
  int dim = 0;
  for (const SpectralData& sd : spectra) {
    int party_dim = -1;  // unitaries of the block shape, modulo one determinant
    for (const Cluster& cl : sd.clusters)
      party_dim += cl.multiplicity * cl.multiplicity;
    dim += party_dim;
  }
  return dim;
}

int kernel_dimension(const PureState& v, double rank_tol) {
  check_geometry_size(v);
  const Eigen::Index n = v.size();
  AlgebraBasis basis = AlgebraBasis::su_product(v.dims());
  std::vector<Eigen::VectorXcd> tangents;
  Eigen::MatrixXd t = orbit_tangent_matrix(v, basis, &tangents);

  // Route (a): the orbit tangent space is the symplectic complement of the
  // kernel, so the dimensions add up to the ambient dimension.
  Eigen::BDCSVD<Eigen::MatrixXd> svd_t(t);
  int orbit = rank_from_singular_values(svd_t.singularValues(), rank_tol);
  long long ambient = 2 * (static_cast<long long>(n) - 1);
  int via_complement = static_cast<int>(ambient) - orbit;

  // Route (b): rank of the pairing of the orbit tangents against an explicit
  // real basis {q_c, i q_c} of the tangent space at the ray, where the q_c
  // complete v to a unitary column system.
  Eigen::VectorXcd vn = v.amplitudes() / v.norm();
  Eigen::MatrixXcd seed(n, 1);
  seed.col(0) = vn;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(seed);
  Eigen::MatrixXcd q = qr.householderQ();
  // Column 0 spans v up to phase; columns 1..n-1 span the tangent space.
  Eigen::MatrixXcd tangent_basis = q.rightCols(n - 1);

  Eigen::MatrixXd omega(basis.dim(), 2 * (n - 1));
  for (int j = 0; j < basis.dim(); ++j) {
    Eigen::RowVectorXcd pair = tangents[static_cast<std::size_t>(j)].adjoint() *
                               tangent_basis;  // <u_j|q_c>
    // omega(u, w) = -Im<u|w>: columns for q_c, then for i q_c.
    omega.row(j).head(n - 1) = -pair.imag();
    omega.row(j).tail(n - 1) = -pair.real();
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd_o(omega);
  int rank_o = rank_from_singular_values(svd_o.singularValues(), rank_tol);
  int direct = static_cast<int>(2 * (n - 1)) - rank_o;

  if (direct != via_complement) {
    std::ostringstream os;
    os << "kernel dimension disagrees between routes: " << direct << " vs "
       << via_complement << "; state is numerically borderline at rank_tol "
       << rank_tol;
    fail(errc::inconsistent_ranks, os.str());
  }
  return direct;
}

DimensionsReport dimensions_report(const PureState& v, double eps_gap,
                                   double rank_tol) {
  check_geometry_size(v);
  AlgebraBasis basis = AlgebraBasis::su_product(v.dims());

  DimensionsReport rep;
  rep.ambient = 2 * (static_cast<long long>(v.size()) - 1);
  rep.dim_orbit = orbit_dimension(v, rank_tol);
  rep.dim_stab_state = projective_stabilizer_dim(v, rank_tol);
  if (rep.dim_stab_state != basis.dim() - rep.dim_orbit)
    fail(errc::inconsistent_ranks,
         "orbit and stabilizer dimensions do not complement each other");
  rep.dim_kernel = kernel_dimension(v, rank_tol);

  PureState vn = v.normalized();
  std::vector<SpectralData> spectra;
  spectra.reserve(static_cast<std::size_t>(v.num_parties()));
  for (int k = 0; k < v.num_parties(); ++k)
    spectra.push_back(spectral_data(vn, k, eps_gap));
  rep.dim_stab_moment = moment_stabilizer_dim(spectra);

  rep.dim_fiber_in_orbit = rep.dim_stab_moment - rep.dim_stab_state;
  rep.fiber_covered = (rep.dim_fiber_in_orbit == rep.dim_kernel);
  rep.rank_tol = rank_tol;
  return rep;
}

}  // namespace lucheck
