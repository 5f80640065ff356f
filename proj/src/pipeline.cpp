#include "lucheck/pipeline.hpp"

#include <cmath>
#include <sstream>

namespace lucheck {

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Equivalent: return "Equivalent";
    case VerdictKind::NotEquivalent: return "NotEquivalent";
    case VerdictKind::Undecided: return "Undecided";
  }
  return "Undecided";
}

const char* to_string(Stage s) {
  switch (s) {
    case Stage::SpectraMismatch: return "SpectraMismatch";
    case Stage::CanonicalEqual: return "CanonicalEqual";
    case Stage::FiberCovered: return "FiberCovered";
    case Stage::GenericPhase: return "GenericPhase";
    case Stage::BlockSearch: return "BlockSearch";
  }
  return "BlockSearch";
}

namespace {

void validate_config(const Config& cfg) {
  const Tolerances& t = cfg.tol;
  const double* eps[] = {&t.eps_unitary, &t.eps_gap,   &t.eps_spec,
                         &t.eps_eq,      &t.eps_opt,   &t.eps_mod,
                         &t.eps_phase,   &t.eps_diag,  &t.rank_tol};
  for (const double* e : eps)
    if (!(*e >= 0.0) || !std::isfinite(*e))
      fail(errc::config_invalid, "tolerances must be finite and >= 0");
  if (t.eps_eq >= 1.0 || t.eps_opt >= 1.0)
    fail(errc::config_invalid, "projective tolerances must be < 1");
  if (cfg.search.restarts < 1 || cfg.search.max_sweeps < 1 ||
      !(cfg.search.conv_delta >= 0.0))
    fail(errc::config_invalid, "search needs restarts >= 1, sweeps >= 1, delta >= 0");
}

double normalized_overlap(const PureState& a, const PureState& b) {
  return std::abs(inner(a, b)) / (a.norm() * b.norm());
}

// Witness for the original inputs from the canonicalizing transforms and a
// stabilizer element S aligning the canonical forms: T1^-1 * S * T2 per party.
LocalUnitaryTuple compose_witness(const LocalUnitaryTuple& t1,
                                  const LocalUnitaryTuple& s,
                                  const LocalUnitaryTuple& t2) {
  return t1.inverse().compose(s.compose(t2));
}

LocalUnitaryTuple identity_tuple(const std::vector<int>& dims) {
  std::vector<Eigen::MatrixXcd> factors;
  factors.reserve(dims.size());
  for (int d : dims) factors.push_back(Eigen::MatrixXcd::Identity(d, d));
  return LocalUnitaryTuple(std::move(factors));
}

}  // namespace

Verdict decide_lu_equivalence(const PureState& v1, const PureState& v2,
                              const Config& cfg) {
  detail::check_same_dims(v1, v2);
  validate_config(cfg);

  Verdict verdict;
  verdict.cfg = cfg;

  // Stage 1: sorted reduced spectra per party are local-unitary invariants.
  PureState n1 = v1.normalized();
  PureState n2 = v2.normalized();
  bool all_match = true;
  for (int k = 0; k < v1.num_parties(); ++k) {
    Eigen::VectorXd s1 = spectral_data(n1, k, cfg.tol.eps_gap).eigenvalues;
    Eigen::VectorXd s2 = spectral_data(n2, k, cfg.tol.eps_gap).eigenvalues;
    double dev = (s1 - s2).cwiseAbs().maxCoeff();
    verdict.spectra_max_deviation = std::max(verdict.spectra_max_deviation, dev);
    verdict.spectra_match_flags.push_back(dev <= cfg.tol.eps_spec);
    all_match = all_match && verdict.spectra_match_flags.back();
    verdict.spectra_v1.push_back(std::move(s1));
    verdict.spectra_v2.push_back(std::move(s2));
  }
  if (!all_match) {
    verdict.kind = VerdictKind::NotEquivalent;
    verdict.stage = Stage::SpectraMismatch;
    return verdict;
  }

  // Stage 2: canonical forms decide directly when they coincide.
  CanonicalForm c1 = canonicalize(v1, cfg.tol.eps_gap);
  CanonicalForm c2 = canonicalize(v2, cfg.tol.eps_gap);
  verdict.canonical_overlap = normalized_overlap(c1.state, c2.state);
  if (projective_equal(c1.state, c2.state, cfg.tol.eps_eq)) {
    verdict.kind = VerdictKind::Equivalent;
    verdict.stage = Stage::CanonicalEqual;
    verdict.witness =
        compose_witness(c1.transform, identity_tuple(v1.dims()), c2.transform);
    verdict.witness_overlap =
        normalized_overlap(v1, apply_tuple(v2, *verdict.witness));
    return verdict;
  }

  BlockStructure blocks = block_structure(c1.spectra);

  // Stage 3: when the geometry covers the whole fiber, equal spectra already
  // imply equivalence; the search below only constructs the certificate.
  verdict.dims = dimensions_report(v1, cfg.tol.eps_gap, cfg.tol.rank_tol);
  if (verdict.dims->fiber_covered) {
    MatchResult search =
        block_overlap_maximize(c1, c2, blocks, cfg.search, cfg.tol);
    verdict.match = search;
    if (search.status == MatchStatus::Matched) {
      verdict.kind = VerdictKind::Equivalent;
      verdict.stage = Stage::FiberCovered;
      verdict.witness =
          compose_witness(c1.transform, *search.witness, c2.transform);
      verdict.witness_overlap =
          normalized_overlap(v1, apply_tuple(v2, *verdict.witness));
      return verdict;
    }
    // Geometry promises a witness but the search missed it; report honestly
    // rather than claiming equivalence without a verified certificate.
    verdict.kind = VerdictKind::Undecided;
    verdict.stage = Stage::BlockSearch;
    return verdict;
  }

  // Stage 4: simple spectra admit an exact diagonal-phase decision.
  if (is_generic(blocks)) {
    MatchResult match = generic_phase_match(c1, c2, cfg.tol.eps_mod,
                                            cfg.tol.eps_phase,
                                            10.0 * cfg.tol.eps_opt);
    verdict.match = match;
    if (match.status == MatchStatus::Matched) {
      verdict.kind = VerdictKind::Equivalent;
      verdict.stage = Stage::GenericPhase;
      verdict.witness =
          compose_witness(c1.transform, *match.witness, c2.transform);
      verdict.witness_overlap =
          normalized_overlap(v1, apply_tuple(v2, *verdict.witness));
      return verdict;
    }
    if (match.status == MatchStatus::RuledOut) {
      verdict.kind = VerdictKind::NotEquivalent;
      verdict.stage = Stage::GenericPhase;
      return verdict;
    }
    // NumericallyUnmatched: fall through to the block search.
  }

  // Stage 5: search the residual block rotations.
  MatchResult search = block_overlap_maximize(c1, c2, blocks, cfg.search, cfg.tol);
  verdict.match = search;
  if (search.status == MatchStatus::Matched) {
    verdict.kind = VerdictKind::Equivalent;
    verdict.stage = Stage::BlockSearch;
    verdict.witness =
        compose_witness(c1.transform, *search.witness, c2.transform);
    verdict.witness_overlap =
        normalized_overlap(v1, apply_tuple(v2, *verdict.witness));
    return verdict;
  }
  verdict.kind = VerdictKind::Undecided;
  verdict.stage = Stage::BlockSearch;
  return verdict;
}

DistinguishabilityReport decide_distinguishability(const PureState& v1,
                                                   const PureState& v2,
                                                   const Config& cfg) {
  detail::check_same_dims(v1, v2);
  validate_config(cfg);

  DistinguishabilityReport rep;
  rep.cfg = cfg;

  PureState n1 = v1.normalized();
  PureState n2 = v2.normalized();
  for (int k = 0; k < v1.num_parties(); ++k) {
    Eigen::MatrixXcd diff = reduced_matrix(n1, k) - reduced_matrix(n2, k);
    rep.max_reduced_deviation =
        std::max(rep.max_reduced_deviation, diff.cwiseAbs().maxCoeff());

    Eigen::VectorXd s1 = spectral_data(n1, k, cfg.tol.eps_gap).eigenvalues;
    Eigen::VectorXd s2 = spectral_data(n2, k, cfg.tol.eps_gap).eigenvalues;
    double dev = (s1 - s2).cwiseAbs().maxCoeff();
    rep.max_spectra_deviation = std::max(rep.max_spectra_deviation, dev);
    rep.per_party_spectra.push_back(dev <= cfg.tol.eps_spec);
    rep.canonical_spectra_equal =
        rep.canonical_spectra_equal && rep.per_party_spectra.back();
  }
  rep.raw_indistinguishable = rep.max_reduced_deviation <= cfg.tol.eps_spec;
  return rep;
}

}  // namespace lucheck
