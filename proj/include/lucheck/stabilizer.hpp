#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lucheck/config.hpp"
#include "lucheck/spectra.hpp"

namespace lucheck {

// Per-party partition of local dimensions into degenerate blocks, listed in
// descending-eigenvalue order.  Residual local rotations that preserve every
// reduced matrix are exactly the block-diagonal unitaries of this shape.
struct BlockStructure {
  std::vector<std::vector<int>> sizes;  // sizes[k] = block sizes of party k

  int num_parties() const { return static_cast<int>(sizes.size()); }
};

BlockStructure block_structure(const std::vector<SpectralData>& spectra);

// True iff every block has size 1 (all reduced eigenvalues simple).
bool is_generic(const BlockStructure& blocks);

enum class MatchStatus {
  Matched,               // witness found and verified
  RuledOut,              // exact obstruction recorded in `detail`
  NumericallyUnmatched,  // search exhausted without certificate; not a proof
};

struct MatchResult {
  MatchStatus status = MatchStatus::NumericallyUnmatched;
  std::optional<LocalUnitaryTuple> witness;  // maps b to a projectively
  double overlap = 0.0;                      // |<a|W b>| on normalized states
  std::string detail;                        // human-readable certificate/reason

  // Diagnostics.
  double modulus_deviation = 0.0;   // worst |amp| disagreement on the support
  double phase_residual = 0.0;      // worst dependent-equation residual mod 2*pi
  std::vector<double> sweep_overlaps;  // winning restart's per-sweep overlaps
  double max_sweep_regression = 0.0;   // worst overlap decrease seen in any sweep
  int winning_restart = -1;
};

// Exact decision for generic canonical pairs.  Preconditions: both inputs are
// canonical forms with matched spectra and all clusters of size 1.  Matching
// is attempted with one phase per local level plus one global phase:
//   arg(a_t) - arg(b_t) = theta + sum_k phi[k][i_k]  (mod 2*pi)  on the support.
// Support or modulus disagreement beyond eps_mod, or an inconsistent phase
// system (dependent-equation residual beyond eps_phase), rules the pair out
// exactly.  A solution is turned into a diagonal witness and verified at
// verify_tol before Matched is returned.
MatchResult generic_phase_match(const CanonicalForm& a, const CanonicalForm& b,
                                double eps_mod, double eps_phase,
                                double verify_tol = 1e-6);

// Maximizes F(U) = |<a|(U_1 x ... x U_M)|b>| over block-diagonal local
// unitaries by alternating per-party polar updates (each update is the exact
// argmax for that party).  Restart 0 starts from the identity; further
// restarts start from Haar-random block-diagonal tuples with seeds derived
// from cfg.seed.  Deterministic given the seed; the winner is the restart with
// the largest overlap, ties resolved toward the lowest restart index.
MatchResult block_overlap_maximize(const CanonicalForm& a,
                                   const CanonicalForm& b,
                                   const BlockStructure& blocks,
                                   const SearchConfig& cfg,
                                   const Tolerances& tol);

// True iff apply_tuple(v2, witness) equals v1 projectively within tol.  When
// `blocks` is given, each factor must also be block-diagonal of that shape.
bool verify_witness(const PureState& v1, const PureState& v2,
                    const LocalUnitaryTuple& witness, double tol,
                    const BlockStructure* blocks = nullptr);

namespace detail {

// Solver for systems of congruences  sum_i x_{c_i} = rhs  (mod 2*pi)  with
// 0/1 coefficient rows.  Rows are reduced against an integer echelon basis by
// unimodular (extended-gcd) row operations, so every dependent row yields an
// exact integer combination of inputs whose residual must vanish mod 2*pi.
class CongruenceSolver {
 public:
  explicit CongruenceSolver(int num_vars);

  // Adds one equation; cols lists the variable indices with coefficient 1
  // (repeats allowed and accumulated).  Returns false iff the row reduced to
  // a dependency whose residual exceeded eps mod 2*pi.
  bool add_equation(const std::vector<int>& cols, double rhs, double eps);

  double worst_residual() const { return worst_residual_; }

  // Solutions of the accumulated system (free variables set to zero).  When
  // echelon pivots exceed 1 the congruence admits several branch choices per
  // pivot; all combinations are enumerated up to `max_branches` candidates.
  std::vector<std::vector<double>> solutions(int max_branches = 512) const;

 private:
  struct Row {
    std::vector<long long> a;
    double rhs = 0.0;
    int pivot = -1;
  };
  int num_vars_;
  std::vector<Row> basis_;  // sorted by pivot column
  double worst_residual_ = 0.0;
};

}  // namespace detail

}  // namespace lucheck
