#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "lucheck/spectra.hpp"
#include "lucheck/stabilizer.hpp"
#include "test_util.hpp"

using lucheck::BlockStructure;
using lucheck::CanonicalForm;
using lucheck::cplx;
using lucheck::errc;
using lucheck::LocalUnitaryTuple;
using lucheck::MatchResult;
using lucheck::MatchStatus;
using lucheck::PureState;
using lucheck::SearchConfig;
using lucheck::Tolerances;
using lucheck::detail::CongruenceSolver;
using testutil::check_throws_code;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double x) { return std::remainder(x, kTwoPi); }

// Four-party states supported on {0000, 0011, 1100, 1111}; reduced matrices
// are diagonal descending by construction, and all four eigenvalue pairs are
// simple, so the states are canonical and generic as built.
PureState four_party(const std::vector<double>& weights,
                     const std::vector<double>& args) {
  std::vector<cplx> amps(16, 0.0);
  const int slots[4] = {0, 3, 12, 15};
  for (int t = 0; t < 4; ++t)
    amps[slots[t]] = std::polar(std::sqrt(weights[t]), args[t]);
  return PureState({2, 2, 2, 2}, Eigen::Map<Eigen::VectorXcd>(amps.data(), 16));
}

CanonicalForm canon(const PureState& v) { return lucheck::canonicalize(v, 1e-8); }

}  // namespace

TEST_CASE("block structure mirrors the degeneracy pattern") {
  CanonicalForm ghz = canon(lucheck::ghz_state(3, 2));
  BlockStructure gb = lucheck::block_structure(ghz.spectra);
  REQUIRE(gb.num_parties() == 3);
  for (const auto& sizes : gb.sizes) {
    REQUIRE(sizes.size() == 1);
    CHECK(sizes[0] == 2);
  }
  CHECK_FALSE(lucheck::is_generic(gb));

  CanonicalForm w = canon(lucheck::w_state(3));
  BlockStructure wb = lucheck::block_structure(w.spectra);
  for (const auto& sizes : wb.sizes) CHECK(sizes == std::vector<int>{1, 1});
  CHECK(lucheck::is_generic(wb));

  CanonicalForm haar = canon(lucheck::random_haar_state({2, 3}, 5));
  CHECK(lucheck::is_generic(lucheck::block_structure(haar.spectra)));
}

TEST_CASE("congruence solver handles independent rows and exposes solutions") {
  CongruenceSolver s(2);
  CHECK(s.add_equation({0, 1}, 1.0, 1e-8));
  auto sols = s.solutions();
  REQUIRE(!sols.empty());
  for (const auto& x : sols) CHECK(std::abs(wrap(x[0] + x[1] - 1.0)) <= 1e-12);

  check_throws_code(errc::config_invalid, [] { CongruenceSolver bad(0); });
  CongruenceSolver r(2);
  check_throws_code(errc::config_invalid,
                    [&] { r.add_equation({2}, 0.0, 1e-8); });
}

TEST_CASE("dependent congruence rows are checked modulo 2*pi") {
  CongruenceSolver s(2);
  CHECK(s.add_equation({0}, 0.3, 1e-8));
  CHECK(s.add_equation({1}, 0.4, 1e-8));
  // Same combination shifted by a full turn: consistent.
  CHECK(s.add_equation({0, 1}, 0.7 + kTwoPi + 1e-12, 1e-8));
  CHECK(s.worst_residual() <= 1e-10);
  // Incompatible dependent row: rejected with the exact residual reported.
  CHECK_FALSE(s.add_equation({0, 1}, 1.2, 1e-8));
  CHECK(s.worst_residual() == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("four-point support dependency forces a residual test") {
  // Support {0000, 0011, 1100, 1111} with one variable per level per party:
  // row(0000) + row(1111) = row(0011) + row(1100), so consistency requires
  // r1 + r4 = r2 + r3 (mod 2*pi).
  const std::vector<std::vector<int>> rows = {
      {0, 2, 4, 6}, {0, 2, 5, 7}, {1, 3, 4, 6}, {1, 3, 5, 7}};

  CongruenceSolver good(8);
  std::vector<double> rhs = {0.1, 0.2, 0.3, 0.4};  // 0.1 + 0.4 == 0.2 + 0.3
  for (int t = 0; t < 4; ++t) CHECK(good.add_equation(rows[t], rhs[t], 1e-8));
  auto sols = good.solutions();
  REQUIRE(!sols.empty());
  for (const auto& x : sols)
    for (int t = 0; t < 4; ++t) {
      double sum = 0.0;
      for (int c : rows[t]) sum += x[c];
      CHECK(std::abs(wrap(sum - rhs[t])) <= 1e-10);
    }

  CongruenceSolver bad(8);
  std::vector<double> rhs2 = {0.1, 0.2, 0.3, 0.65};  // residual 0.25
  CHECK(bad.add_equation(rows[0], rhs2[0], 1e-8));
  CHECK(bad.add_equation(rows[1], rhs2[1], 1e-8));
  CHECK(bad.add_equation(rows[2], rhs2[2], 1e-8));
  CHECK_FALSE(bad.add_equation(rows[3], rhs2[3], 1e-8));
  CHECK(bad.worst_residual() == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("affine-plane support is independent: every right side fits") {
  // Points (x1,y1,z1), (x1,y2,z2), (x2,y1,z2), (x2,y2,z1): no integer
  // combination of the rows vanishes, so any phases can be matched.
  const std::vector<std::vector<int>> rows = {
      {0, 2, 4}, {0, 3, 5}, {1, 2, 5}, {1, 3, 4}};
  CongruenceSolver s(6);
  std::vector<double> rhs = {0.7, -0.3, 1.1, 2.0};
  for (int t = 0; t < 4; ++t) CHECK(s.add_equation(rows[t], rhs[t], 1e-8));
  auto sols = s.solutions();
  REQUIRE(!sols.empty());
  for (int t = 0; t < 4; ++t) {
    double sum = 0.0;
    for (int c : rows[t]) sum += sols[0][c];
    CHECK(std::abs(wrap(sum - rhs[t])) <= 1e-10);
  }
}

TEST_CASE("repeated columns create branch choices") {
  // 2*x0 = 1.0 (mod 2*pi) has exactly two solutions in [0, 2*pi).
  CongruenceSolver s(1);
  CHECK(s.add_equation({0, 0}, 1.0, 1e-8));
  auto sols = s.solutions();
  REQUIRE(sols.size() == 2);
  for (const auto& x : sols) CHECK(std::abs(wrap(2.0 * x[0] - 1.0)) <= 1e-12);
  CHECK(std::abs(wrap(sols[0][0] - sols[1][0])) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("phase matching accepts the same state and phase-rotated copies") {
  CanonicalForm a = canon(lucheck::random_haar_state({2, 3}, 61));

  MatchResult same = lucheck::generic_phase_match(a, a, 1e-10, 1e-8);
  CHECK(same.status == MatchStatus::Matched);
  REQUIRE(same.witness.has_value());
  CHECK(same.overlap == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(lucheck::verify_witness(a.state, a.state, *same.witness, 1e-8));

  // Diagonal phases commute with canonicality; the matcher must undo them.
  Eigen::MatrixXcd d1 = Eigen::MatrixXcd::Zero(2, 2);
  d1(0, 0) = std::polar(1.0, 0.9);
  d1(1, 1) = std::polar(1.0, -0.4);
  Eigen::MatrixXcd d2 = Eigen::MatrixXcd::Zero(3, 3);
  d2(0, 0) = std::polar(1.0, 0.2);
  d2(1, 1) = std::polar(1.0, 1.7);
  d2(2, 2) = std::polar(1.0, -2.5);
  LocalUnitaryTuple phases({d1, d2});
  CanonicalForm b = canon(lucheck::apply_tuple(a.state, phases));

  MatchResult rot = lucheck::generic_phase_match(a, b, 1e-10, 1e-8);
  CHECK(rot.status == MatchStatus::Matched);
  REQUIRE(rot.witness.has_value());
  CHECK(lucheck::verify_witness(a.state, b.state, *rot.witness, 1e-8));
  CHECK(rot.overlap == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("phase matching rules out support mismatch exactly") {
  CanonicalForm psi = canon(testutil::qutrit_psi());
  CanonicalForm phi = canon(testutil::qutrit_phi());
  MatchResult res = lucheck::generic_phase_match(psi, phi, 1e-10, 1e-8);
  CHECK(res.status == MatchStatus::RuledOut);
  CHECK(res.detail == "supports differ at 5 basis state(s), first at (0,0,0)");
  CHECK_FALSE(res.witness.has_value());
}

TEST_CASE("phase matching rules out modulus disagreement") {
  PureState a = four_party({0.4, 0.3, 0.2, 0.1}, {0, 0, 0, 0});
  PureState b = four_party({0.45, 0.25, 0.15, 0.15}, {0, 0, 0, 0});
  MatchResult res = lucheck::generic_phase_match(canon(a), canon(b), 1e-10, 1e-8);
  CHECK(res.status == MatchStatus::RuledOut);
  // Worst modulus gap is at |1111>: sqrt(0.15) - sqrt(0.1).
  CHECK(res.modulus_deviation ==
        doctest::Approx(std::sqrt(0.15) - std::sqrt(0.1)).epsilon(1e-9));
}

TEST_CASE("phase matching rules out an inconsistent phase twist") {
  PureState a = four_party({0.4, 0.3, 0.2, 0.1}, {0, 0, 0, 0});
  PureState b = four_party({0.4, 0.3, 0.2, 0.1}, {0, 0, 0, 0.4});
  MatchResult res = lucheck::generic_phase_match(canon(a), canon(b), 1e-10, 1e-8);
  CHECK(res.status == MatchStatus::RuledOut);
  CHECK(res.phase_residual == doctest::Approx(0.4).epsilon(1e-9));
  CHECK_FALSE(res.witness.has_value());
}

TEST_CASE("phase matching solves a consistent product-phase pattern") {
  // args(t) = theta + sum_k phi_k[i_k] with theta = 0.3,
  // phi = (0.1, 0.2), (0, 0.15), (0.05, 0), (0, 0.25).
  PureState a = four_party({0.4, 0.3, 0.2, 0.1}, {0, 0, 0, 0});
  PureState b = four_party({0.4, 0.3, 0.2, 0.1}, {0.45, 0.65, 0.7, 0.9});
  MatchResult res = lucheck::generic_phase_match(canon(a), canon(b), 1e-10, 1e-8);
  CHECK(res.status == MatchStatus::Matched);
  REQUIRE(res.witness.has_value());
  CHECK(lucheck::verify_witness(a, b, *res.witness, 1e-8));
  CHECK(res.overlap == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("phase matching requires simple spectra and valid tolerances") {
  CanonicalForm ghz = canon(lucheck::ghz_state(3, 2));
  check_throws_code(errc::not_generic, [&] {
    lucheck::generic_phase_match(ghz, ghz, 1e-10, 1e-8);
  });
  CanonicalForm w = canon(lucheck::w_state(3));
  check_throws_code(errc::config_invalid, [&] {
    lucheck::generic_phase_match(w, w, -1.0, 1e-8);
  });
}

TEST_CASE("block search finds the identity immediately for equal inputs") {
  CanonicalForm a = canon(lucheck::random_haar_state({2, 2, 2}, 71));
  BlockStructure blocks = lucheck::block_structure(a.spectra);
  SearchConfig cfg;
  Tolerances tol;
  MatchResult res = lucheck::block_overlap_maximize(a, a, blocks, cfg, tol);
  CHECK(res.status == MatchStatus::Matched);
  CHECK(res.winning_restart == 0);  // the identity start already succeeds
  CHECK(res.overlap == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(res.witness.has_value());
  CHECK(lucheck::verify_witness(a.state, a.state, *res.witness, 1e-6, &blocks));
}

TEST_CASE("block search certifies rotated degenerate states") {
  PureState ghz = lucheck::ghz_state(3, 2);
  LocalUnitaryTuple u = lucheck::random_local_unitary_tuple({2, 2, 2}, 404);
  CanonicalForm a = canon(ghz);
  CanonicalForm b = canon(lucheck::apply_tuple(ghz, u));
  BlockStructure blocks = lucheck::block_structure(a.spectra);
  SearchConfig cfg;
  Tolerances tol;

  MatchResult res = lucheck::block_overlap_maximize(a, b, blocks, cfg, tol);
  CHECK(res.status == MatchStatus::Matched);
  CHECK(res.overlap >= 1.0 - 1e-7);
  REQUIRE(res.witness.has_value());
  CHECK(lucheck::verify_witness(a.state, b.state, *res.witness, 1e-6, &blocks));

  // Deterministic: the same configuration reproduces the result bitwise.
  MatchResult again = lucheck::block_overlap_maximize(a, b, blocks, cfg, tol);
  CHECK(again.overlap == res.overlap);
  CHECK(again.winning_restart == res.winning_restart);
  CHECK(again.sweep_overlaps == res.sweep_overlaps);

  // Sweeps never lose ground: each polar update is an exact argmax.
  CHECK(res.max_sweep_regression <= 1e-12);
  REQUIRE(!res.sweep_overlaps.empty());
  for (std::size_t i = 1; i < res.sweep_overlaps.size(); ++i)
    CHECK(res.sweep_overlaps[i] >= res.sweep_overlaps[i - 1] - 1e-12);
}

TEST_CASE("block search reports honest failure on inequivalent degenerates") {
  // Four-qubit GHZ and a product of two Bell pairs share every reduced
  // matrix (I/2), but no local unitary connects them; the best block overlap
  // stalls at 1/sqrt(2).
  CanonicalForm a = canon(lucheck::ghz_state(4, 2));
  CanonicalForm b = canon(testutil::double_bell_state());
  BlockStructure blocks = lucheck::block_structure(a.spectra);
  SearchConfig cfg;
  Tolerances tol;
  MatchResult res = lucheck::block_overlap_maximize(a, b, blocks, cfg, tol);
  CHECK(res.status == MatchStatus::NumericallyUnmatched);
  CHECK_FALSE(res.witness.has_value());
  CHECK(res.overlap >= 0.70);
  CHECK(res.overlap <= 0.7072);
  CHECK(res.max_sweep_regression <= 1e-12);

  check_throws_code(errc::config_invalid, [&] {
    SearchConfig zero;
    zero.restarts = 0;
    lucheck::block_overlap_maximize(a, b, blocks, zero, tol);
  });
}

TEST_CASE("witness verification checks the map and the block shape") {
  std::vector<int> dims = {2, 3};
  PureState v2 = lucheck::random_haar_state(dims, 88);
  LocalUnitaryTuple w = lucheck::random_local_unitary_tuple(dims, 89);
  PureState v1 = lucheck::apply_tuple(v2, w);
  CHECK(lucheck::verify_witness(v1, v2, w, 1e-10));

  // Global phase on the target is irrelevant.
  Eigen::VectorXcd ph = std::polar(1.0, 2.1) * v1.amplitudes();
  PureState v1p(dims, ph);
  CHECK(lucheck::verify_witness(v1p, v2, w, 1e-10));

  LocalUnitaryTuple wrong = lucheck::random_local_unitary_tuple(dims, 90);
  CHECK_FALSE(lucheck::verify_witness(v1, v2, wrong, 1e-6));

  // A dense witness leaks outside all-simple blocks: rejected by shape.
  BlockStructure simple;
  simple.sizes = {{1, 1}, {1, 1, 1}};
  check_throws_code(errc::shape_mismatch, [&] {
    lucheck::verify_witness(v1, v2, w, 1e-6, &simple);
  });

  // Diagonal witnesses pass the same shape check.
  Eigen::MatrixXcd d1 = Eigen::MatrixXcd::Zero(2, 2);
  d1(0, 0) = std::polar(1.0, 0.3);
  d1(1, 1) = std::polar(1.0, -1.2);
  Eigen::MatrixXcd d2 = Eigen::MatrixXcd::Identity(3, 3);
  LocalUnitaryTuple diag({d1, d2});
  PureState v3 = lucheck::apply_tuple(v2, diag);
  CHECK(lucheck::verify_witness(v3, v2, diag, 1e-10, &simple));

  LocalUnitaryTuple small({Eigen::MatrixXcd::Identity(2, 2)});
  check_throws_code(errc::dimension_mismatch,
                    [&] { lucheck::verify_witness(v1, v2, small, 1e-6); });
}
