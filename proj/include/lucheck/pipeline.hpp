#pragma once

#include <optional>
#include <vector>

#include "lucheck/config.hpp"
#include "lucheck/geometry.hpp"
#include "lucheck/spectra.hpp"
#include "lucheck/stabilizer.hpp"

namespace lucheck {

enum class VerdictKind { Equivalent, NotEquivalent, Undecided };

// Stage at which the decision was reached, in pipeline order.
enum class Stage {
  SpectraMismatch,  // sorted reduced spectra differ for some party
  CanonicalEqual,   // canonical forms coincide projectively
  FiberCovered,     // geometry guarantees equivalence on this fiber
  GenericPhase,     // exact phase matching for simple spectra
  BlockSearch,      // numerical search over residual block rotations
};

const char* to_string(VerdictKind k);
const char* to_string(Stage s);

struct Verdict {
  VerdictKind kind = VerdictKind::Undecided;
  Stage stage = Stage::BlockSearch;

  // Present for every Equivalent verdict; maps v2 onto v1 projectively.
  std::optional<LocalUnitaryTuple> witness;
  double witness_overlap = 0.0;  // |<v1|W v2>| on normalized states

  // Evidence gathered along the way.
  std::vector<Eigen::VectorXd> spectra_v1, spectra_v2;  // per party, normalized
  std::vector<bool> spectra_match_flags;
  double spectra_max_deviation = 0.0;
  double canonical_overlap = 0.0;           // |<v1'|v2'>| of canonical forms
  std::optional<DimensionsReport> dims;     // stage 3 geometry (first state)
  std::optional<MatchResult> match;         // stage 4/5 result
  Config cfg;
};

// Decides local-unitary equivalence of the rays of v1 and v2:
//   1. compare sorted reduced spectra per party; any mismatch is final;
//   2. canonicalize both; projective equality decides;
//   3. if the geometry of the first state covers the whole fiber, the states
//      are equivalent; the block search only supplies the witness;
//   4. simple spectra: exact phase matching decides;
//   5. otherwise the block search either certifies equivalence or returns
//      Undecided with the best overlap found.
Verdict decide_lu_equivalence(const PureState& v1, const PureState& v2,
                              const Config& cfg);

struct DistinguishabilityReport {
  bool raw_indistinguishable = false;   // reduced matrices agree as given
  bool canonical_spectra_equal = true;  // sorted spectra agree per party
  std::vector<bool> per_party_spectra;
  double max_reduced_deviation = 0.0;   // worst reduced-matrix entry gap
  double max_spectra_deviation = 0.0;
  Config cfg;
};

// Local indistinguishability in both senses: as given (same local expectation
// values) and after canonicalization (same local spectra).
DistinguishabilityReport decide_distinguishability(const PureState& v1,
                                                   const PureState& v2,
                                                   const Config& cfg);

}  // namespace lucheck
