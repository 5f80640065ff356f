#pragma once

#include <cstdint>

namespace lucheck {

// Tolerances apply to normalized states unless a function documents otherwise.
struct Tolerances {
  double eps_unitary = 1e-10;  // max-norm bound on U'U - I for local unitary tuples
  double eps_gap = 1e-8;       // eigenvalue gap that separates spectral clusters
  double eps_spec = 1e-8;      // element-wise bound when comparing sorted spectra
  double eps_eq = 1e-8;        // projective-equality slack for canonical forms
  double eps_opt = 1e-7;       // block search accepts overlap >= 1 - eps_opt
  double eps_mod = 1e-10;      // support / modulus threshold in the phase matcher
  double eps_phase = 1e-8;     // residual bound (mod 2*pi) for dependent phase equations
  double eps_diag = 1e-10;     // off-diagonal bound for canonical reduced matrices
  double rank_tol = 1e-10;     // relative singular-value cutoff for rank decisions
};

struct SearchConfig {
  int restarts = 20;         // independent starts of the block overlap search
  int max_sweeps = 200;      // per-restart sweep cap
  double conv_delta = 1e-12; // stop a restart once a sweep gains less than this
  std::uint64_t seed = 42;   // base seed; restart r uses a value derived from (seed, r)
};

struct Config {
  Tolerances tol;
  SearchConfig search;
};

}  // namespace lucheck
