#include "lucheck/stabilizer.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "lucheck/rng.hpp"

namespace lucheck {

namespace {

double wrap_to_pi(double x) { return std::remainder(x, 2.0 * M_PI); }

std::string multi_index_string(const std::vector<int>& dims, Eigen::Index flat) {
  std::ostringstream os;
  os << "(";
  std::vector<int> idx(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    idx[k] = static_cast<int>(flat % dims[k]);
    flat /= dims[k];
  }
  for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? "," : "") << idx[k];
  os << ")";
  return os.str();
}

void require_generic(const CanonicalForm& form, const char* which) {
  for (const SpectralData& sd : form.spectra)
    for (const Cluster& cl : sd.clusters)
      if (cl.multiplicity != 1) {
        std::ostringstream os;
        os << which << " state has a degenerate reduced spectrum (party "
           << sd.party + 1 << "); phase matching requires simple spectra";
        fail(errc::not_generic, os.str());
      }
}

}  // namespace

BlockStructure block_structure(const std::vector<SpectralData>& spectra) {
  BlockStructure blocks;
  blocks.sizes.reserve(spectra.size());
  for (const SpectralData& sd : spectra) {
    std::vector<int> sizes;
    sizes.reserve(sd.clusters.size());
    for (const Cluster& cl : sd.clusters) sizes.push_back(cl.multiplicity);
    blocks.sizes.push_back(std::move(sizes));
  }
  return blocks;
}

bool is_generic(const BlockStructure& blocks) {
  for (const auto& sizes : blocks.sizes)
    for (int m : sizes)
      if (m != 1) return false;
  return true;
}

namespace detail {

namespace {

// Extended gcd: returns g = gcd(a, b) >= 0 with x*a + y*b = g.
long long ext_gcd(long long a, long long b, long long& x, long long& y) {
  if (b == 0) {
    x = (a < 0) ? -1 : 1;
    y = 0;
    return std::llabs(a);
  }
  long long x1, y1;
  long long g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

constexpr long long kCoeffLimit = 1LL << 42;

void check_coeff(long long v) {
  if (std::llabs(v) > kCoeffLimit)
    fail(errc::config_invalid, "phase-system elimination coefficients overflowed");
}

}  // namespace

CongruenceSolver::CongruenceSolver(int num_vars) : num_vars_(num_vars) {
  if (num_vars < 1) fail(errc::config_invalid, "congruence system needs variables");
}

bool CongruenceSolver::add_equation(const std::vector<int>& cols, double rhs,
                                    double eps) {
  Row row;
  row.a.assign(static_cast<std::size_t>(num_vars_), 0);
  for (int c : cols) {
    if (c < 0 || c >= num_vars_)
      fail(errc::config_invalid, "congruence variable index out of range");
    row.a[static_cast<std::size_t>(c)] += 1;
  }
  row.rhs = rhs;

  // Reduce against the echelon basis with unimodular two-row transforms, so a
  // vanishing row is an exact integer combination of the original equations
  // and its right-hand side is determined mod 2*pi.
  for (;;) {
    int lead = -1;
    for (int c = 0; c < num_vars_; ++c)
      if (row.a[static_cast<std::size_t>(c)] != 0) {
        lead = c;
        break;
      }
    if (lead < 0) {
      double residual = wrap_to_pi(row.rhs);
      worst_residual_ = std::max(worst_residual_, std::abs(residual));
      return std::abs(residual) <= eps;
    }

    auto it = std::find_if(basis_.begin(), basis_.end(),
                           [lead](const Row& b) { return b.pivot == lead; });
    if (it == basis_.end()) {
      if (row.a[static_cast<std::size_t>(lead)] < 0) {
        for (long long& v : row.a) v = -v;
        row.rhs = -row.rhs;
      }
      row.pivot = lead;
      auto pos = std::find_if(basis_.begin(), basis_.end(),
                              [lead](const Row& b) { return b.pivot > lead; });
      basis_.insert(pos, std::move(row));
      return true;
    }

    Row& b = *it;
    long long p = b.a[static_cast<std::size_t>(lead)];
    long long q = row.a[static_cast<std::size_t>(lead)];
    long long x, y;
    long long g = ext_gcd(p, q, x, y);
    // [b; row] <- [[x, y], [-q/g, p/g]] * [b; row], determinant +1.
    for (int c = 0; c < num_vars_; ++c) {
      long long bc = b.a[static_cast<std::size_t>(c)];
      long long rc = row.a[static_cast<std::size_t>(c)];
      long long nb = x * bc + y * rc;
      long long nr = (p / g) * rc - (q / g) * bc;
      check_coeff(nb);
      check_coeff(nr);
      b.a[static_cast<std::size_t>(c)] = nb;
      row.a[static_cast<std::size_t>(c)] = nr;
    }
    double b_rhs = b.rhs;
    double r_rhs = row.rhs;
    b.rhs = static_cast<double>(x) * b_rhs + static_cast<double>(y) * r_rhs;
    row.rhs = static_cast<double>(p / g) * r_rhs - static_cast<double>(q / g) * b_rhs;
  }
}

std::vector<std::vector<double>> CongruenceSolver::solutions(int max_branches) const {
  // Back-substitute from the last pivot.  A pivot h > 1 solves
  // h*x = value (mod 2*pi), which has h representatives; enumerate every
  // combination (capped) because the choice feeds equations further up.
  std::vector<std::vector<double>> out;
  std::vector<double> x(static_cast<std::size_t>(num_vars_), 0.0);

  // Iterative odometer over branch choices, one digit per basis row.
  std::vector<int> choice(basis_.size(), 0);
  for (;;) {
    for (std::size_t idx = basis_.size(); idx-- > 0;) {
      const Row& r = basis_[idx];
      double rest = 0.0;
      for (int c = r.pivot + 1; c < num_vars_; ++c)
        rest += static_cast<double>(r.a[static_cast<std::size_t>(c)]) *
                x[static_cast<std::size_t>(c)];
      long long h = r.a[static_cast<std::size_t>(r.pivot)];
      double value = r.rhs - rest + 2.0 * M_PI * choice[idx];
      x[static_cast<std::size_t>(r.pivot)] = value / static_cast<double>(h);
    }
    out.push_back(x);
    if (static_cast<int>(out.size()) >= max_branches) break;

    // Advance the odometer; digit i counts modulo its pivot value.
    std::size_t i = 0;
    for (; i < basis_.size(); ++i) {
      long long h = basis_[i].a[static_cast<std::size_t>(basis_[i].pivot)];
      if (choice[i] + 1 < h) {
        ++choice[i];
        break;
      }
      choice[i] = 0;
    }
    if (i == basis_.size()) break;
  }
  return out;
}

}  // namespace detail

MatchResult generic_phase_match(const CanonicalForm& a, const CanonicalForm& b,
                                double eps_mod, double eps_phase,
                                double verify_tol) {
  detail::check_same_dims(a.state, b.state);
  require_generic(a, "first");
  require_generic(b, "second");
  if (eps_mod < 0.0 || eps_phase < 0.0)
    fail(errc::config_invalid, "phase-matching tolerances must be >= 0");

  const std::vector<int>& dims = a.state.dims();
  Eigen::VectorXcd an = a.state.amplitudes() / a.state.norm();
  Eigen::VectorXcd bn = b.state.amplitudes() / b.state.norm();

  MatchResult res;

  // (i) Supports must coincide.
  Eigen::Index support_mismatches = 0;
  Eigen::Index first_mismatch = -1;
  for (Eigen::Index t = 0; t < an.size(); ++t) {
    bool in_a = std::abs(an[t]) > eps_mod;
    bool in_b = std::abs(bn[t]) > eps_mod;
    if (in_a != in_b) {
      ++support_mismatches;
      if (first_mismatch < 0) first_mismatch = t;
    }
  }
  if (support_mismatches > 0) {
    res.status = MatchStatus::RuledOut;
    std::ostringstream os;
    os << "supports differ at " << support_mismatches
       << " basis state(s), first at " << multi_index_string(dims, first_mismatch);
    res.detail = os.str();
    return res;
  }

  // (ii) Moduli must agree on the support.
  double worst_mod = 0.0;
  Eigen::Index worst_mod_at = -1;
  for (Eigen::Index t = 0; t < an.size(); ++t) {
    if (std::abs(an[t]) <= eps_mod) continue;
    double dev = std::abs(std::abs(an[t]) - std::abs(bn[t]));
    if (dev > worst_mod) {
      worst_mod = dev;
      worst_mod_at = t;
    }
  }
  res.modulus_deviation = worst_mod;
  if (worst_mod > eps_mod) {
    res.status = MatchStatus::RuledOut;
    std::ostringstream os;
    os << "amplitude moduli differ by " << worst_mod << " at "
       << multi_index_string(dims, worst_mod_at);
    res.detail = os.str();
    return res;
  }

  // (iii) Phase system: one variable per local level per party plus a global
  // phase; each support state contributes one congruence mod 2*pi.
  std::vector<int> offsets(dims.size());
  int num_vars = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    offsets[k] = num_vars;
    num_vars += dims[k];
  }
  const int theta = num_vars++;

  detail::CongruenceSolver solver(num_vars);
  bool consistent = true;
  for (Eigen::Index t = 0; t < an.size(); ++t) {
    if (std::abs(an[t]) <= eps_mod) continue;
    std::vector<int> cols;
    cols.reserve(dims.size() + 1);
    Eigen::Index rem = t;
    for (std::size_t k = dims.size(); k-- > 0;) {
      cols.push_back(offsets[k] + static_cast<int>(rem % dims[k]));
      rem /= dims[k];
    }
    cols.push_back(theta);
    double rhs = std::arg(an[t]) - std::arg(bn[t]);
    if (!solver.add_equation(cols, rhs, eps_phase)) consistent = false;
  }
  res.phase_residual = solver.worst_residual();
  if (!consistent) {
    res.status = MatchStatus::RuledOut;
    std::ostringstream os;
    os << "phase system inconsistent: dependent-equation residual "
       << solver.worst_residual() << " exceeds " << eps_phase << " (mod 2*pi)";
    res.detail = os.str();
    return res;
  }

  // Turn each solution into a diagonal witness (global phase folded into the
  // first party) and keep the first one that verifies.
  for (const std::vector<double>& x : solver.solutions()) {
    std::vector<Eigen::MatrixXcd> factors;
    factors.reserve(dims.size());
    for (std::size_t k = 0; k < dims.size(); ++k) {
      Eigen::VectorXcd diag(dims[k]);
      for (int i = 0; i < dims[k]; ++i) {
        double phi = x[static_cast<std::size_t>(offsets[k] + i)];
        if (k == 0) phi += x[static_cast<std::size_t>(theta)];
        diag[i] = std::polar(1.0, phi);
      }
      factors.push_back(diag.asDiagonal());
    }
    LocalUnitaryTuple witness(std::move(factors));
    if (verify_witness(a.state, b.state, witness, verify_tol)) {
      res.status = MatchStatus::Matched;
      res.overlap = std::abs(an.dot(apply_tuple(b.state.normalized(), witness)
                                        .amplitudes()));
      res.witness = std::move(witness);
      res.detail = "diagonal phase witness recovered";
      return res;
    }
  }

  res.status = MatchStatus::NumericallyUnmatched;
  res.detail =
      "phase system consistent but no solution branch verified; "
      "treat as undecided";
  return res;
}

namespace {

struct BlockLayout {
  // Per party: block start offsets (into the local dimension) and sizes.
  std::vector<std::vector<int>> starts;
  std::vector<std::vector<int>> sizes;
};

BlockLayout make_layout(const std::vector<int>& dims, const BlockStructure& blocks) {
  if (static_cast<int>(dims.size()) != blocks.num_parties())
    fail(errc::dimension_mismatch, "block structure party count mismatch");
  BlockLayout layout;
  layout.starts.resize(dims.size());
  layout.sizes = blocks.sizes;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    int off = 0;
    for (int m : blocks.sizes[k]) {
      if (m < 1) fail(errc::shape_mismatch, "block sizes must be >= 1");
      layout.starts[k].push_back(off);
      off += m;
    }
    if (off != dims[k])
      fail(errc::shape_mismatch, "block sizes do not sum to the local dimension");
  }
  return layout;
}

// G[i][j] = sum over the other parties of conj(a[..i..]) * b[..j..].
Eigen::MatrixXcd cross_matrix(const std::vector<int>& dims,
                              const Eigen::VectorXcd& a,
                              const Eigen::VectorXcd& b, int k) {
  Eigen::Index left, d, right;
  detail::axis_extents(dims, k, left, d, right);
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index l = 0; l < left; ++l)
    for (Eigen::Index i = 0; i < d; ++i) {
      const cplx* ai = a.data() + (l * d + i) * right;
      for (Eigen::Index j = 0; j < d; ++j) {
        const cplx* bj = b.data() + (l * d + j) * right;
        cplx acc(0.0, 0.0);
        for (Eigen::Index r = 0; r < right; ++r) acc += std::conj(ai[r]) * bj[r];
        g(i, j) += acc;
      }
    }
  return g;
}

Eigen::MatrixXcd random_block_diagonal(int d, const std::vector<int>& starts,
                                       const std::vector<int>& sizes, Rng& rng) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t n = 0; n < sizes.size(); ++n) {
    int m = sizes[n];
    int s = starts[n];
    if (m == 1) {
      u(s, s) = std::polar(1.0, rng.uniform(-M_PI, M_PI));
      continue;
    }
    Eigen::MatrixXcd z(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) z(i, j) = rng.cgauss();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::VectorXcd r_diag = qr.matrixQR().diagonal();
    for (int j = 0; j < m; ++j) {
      double mag = std::abs(r_diag[j]);
      q.col(j) *= (mag == 0.0) ? cplx(1.0, 0.0) : r_diag[j] / mag;
    }
    u.block(s, s, m, m) = q;
  }
  return u;
}

}  // namespace

MatchResult block_overlap_maximize(const CanonicalForm& a, const CanonicalForm& b,
                                   const BlockStructure& blocks,
                                   const SearchConfig& cfg,
                                   const Tolerances& tol) {
  detail::check_same_dims(a.state, b.state);
  if (cfg.restarts < 1 || cfg.max_sweeps < 1 || cfg.conv_delta < 0.0)
    fail(errc::config_invalid, "search needs restarts >= 1, sweeps >= 1, delta >= 0");
  const std::vector<int>& dims = a.state.dims();
  const int parties = static_cast<int>(dims.size());
  BlockLayout layout = make_layout(dims, blocks);

  Eigen::VectorXcd an = a.state.amplitudes() / a.state.norm();
  Eigen::VectorXcd bn = b.state.amplitudes() / b.state.norm();

  double best_overlap = -1.0;
  int best_restart = -1;
  std::vector<Eigen::MatrixXcd> best_factors;
  std::vector<double> best_trace;
  double worst_regression = 0.0;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    // Restart 0 starts at the identity (canonical forms are often already
    // aligned); later restarts draw Haar block-diagonal tuples.
    std::vector<Eigen::MatrixXcd> u(static_cast<std::size_t>(parties));
    for (int k = 0; k < parties; ++k) {
      if (restart == 0) {
        u[k] = Eigen::MatrixXcd::Identity(dims[k], dims[k]);
      } else {
        Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(restart) * 7919u +
                                       static_cast<std::uint64_t>(k)));
        u[k] = random_block_diagonal(dims[k], layout.starts[k], layout.sizes[k], rng);
      }
    }

    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(cfg.max_sweeps));
    double prev = -1.0;
    for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
      double objective = 0.0;
      for (int k = 0; k < parties; ++k) {
        // Contract everything except party k, then take the per-block polar
        // factor: the exact argmax of Re tr(U_k G^T) over block unitaries.
        Eigen::VectorXcd partial = bn;
        for (int l = 0; l < parties; ++l)
          if (l != k) partial = apply_on_party(dims, partial, l, u[l]);
        Eigen::MatrixXcd g = cross_matrix(dims, an, partial, k);
        double value = 0.0;
        Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(dims[k], dims[k]);
        for (std::size_t n = 0; n < layout.sizes[k].size(); ++n) {
          int m = layout.sizes[k][n];
          int s = layout.starts[k][n];
          Eigen::MatrixXcd sub = g.block(s, s, m, m).transpose();
          Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
              sub, Eigen::ComputeFullU | Eigen::ComputeFullV);
          next.block(s, s, m, m) = svd.matrixV() * svd.matrixU().adjoint();
          value += svd.singularValues().sum();
        }
        u[static_cast<std::size_t>(k)] = next;
        objective = value;
      }
      trace.push_back(objective);
      if (prev >= 0.0) {
        worst_regression = std::max(worst_regression, prev - objective);
        if (objective - prev < cfg.conv_delta) break;
      }
      prev = objective;
    }

    double overlap = trace.empty() ? 0.0 : trace.back();
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best_restart = restart;
      best_factors = u;
      best_trace = trace;
    }
  }

  MatchResult res;
  res.overlap = best_overlap;
  res.winning_restart = best_restart;
  res.sweep_overlaps = std::move(best_trace);
  res.max_sweep_regression = worst_regression;

  if (best_overlap >= 1.0 - tol.eps_opt) {
    LocalUnitaryTuple witness(std::move(best_factors), tol.eps_unitary);
    if (verify_witness(a.state, b.state, witness, 10.0 * tol.eps_opt, &blocks)) {
      res.status = MatchStatus::Matched;
      res.witness = std::move(witness);
      std::ostringstream os;
      os << "block search reached overlap " << best_overlap << " at restart "
         << best_restart;
      res.detail = os.str();
      return res;
    }
  }

  res.status = MatchStatus::NumericallyUnmatched;
  std::ostringstream os;
  os << "block search exhausted " << cfg.restarts << " restart(s); best overlap "
     << best_overlap << " below acceptance " << 1.0 - tol.eps_opt;
  res.detail = os.str();
  return res;
}

bool verify_witness(const PureState& v1, const PureState& v2,
                    const LocalUnitaryTuple& witness, double tol,
                    const BlockStructure* blocks) {
  detail::check_same_dims(v1, v2);
  if (witness.dims() != v1.dims())
    fail(errc::dimension_mismatch, "witness does not match the state dimensions");
  if (blocks != nullptr) {
    BlockLayout layout = make_layout(v1.dims(), *blocks);
    for (int k = 0; k < witness.num_parties(); ++k) {
      Eigen::MatrixXcd off = witness.factor(k);
      for (std::size_t n = 0; n < layout.sizes[static_cast<std::size_t>(k)].size(); ++n) {
        int m = layout.sizes[static_cast<std::size_t>(k)][n];
        int s = layout.starts[static_cast<std::size_t>(k)][n];
        off.block(s, s, m, m).setZero();
      }
      double leak = off.cwiseAbs().maxCoeff();
      if (leak > tol) {
        std::ostringstream os;
        os << "witness factor " << k + 1 << " leaks " << leak
           << " outside the declared blocks";
        fail(errc::shape_mismatch, os.str());
      }
    }
  }
  return projective_equal(v1, apply_tuple(v2, witness), tol);
}

}  // namespace lucheck
