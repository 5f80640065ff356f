#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "lucheck/json_io.hpp"
#include "lucheck/pipeline.hpp"
#include "test_util.hpp"

using lucheck::Config;
using lucheck::errc;
using lucheck::LocalUnitaryTuple;
using lucheck::PureState;
using nlohmann::json;
using testutil::check_throws_code;

namespace {

// Unique temp file removed at scope exit.
struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name)
      : path(std::filesystem::temp_directory_path() /
             ("lucheck_test_" + std::to_string(::getpid()) + "_" + name)) {}
  ~TempFile() { std::filesystem::remove(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("state save/load is a lossless round trip") {
  PureState v = lucheck::random_haar_state({2, 3}, 9);
  v.set_label("roundtrip");
  TempFile f("state.json");
  lucheck::save_state(v, f.str());
  PureState back = lucheck::load_state(f.str());
  CHECK(back.dims() == v.dims());
  CHECK(back.label() == "roundtrip");
  CHECK(back.amplitudes() == v.amplitudes());  // bitwise
}

TEST_CASE("state parsing pins down malformed input") {
  CHECK_NOTHROW(lucheck::parse_state(
      R"({"dims": [2], "amplitudes": [[1,0],[0,0]]})"));

  check_throws_code(errc::parse_error, [] { lucheck::parse_state("{"); });
  check_throws_code(errc::parse_error, [] { lucheck::parse_state("[1,2]"); });
  check_throws_code(errc::parse_error, [] {
    lucheck::parse_state(R"({"amplitudes": [[1,0],[0,0]]})");
  });
  check_throws_code(errc::parse_error, [] {
    lucheck::parse_state(R"({"dims": 2, "amplitudes": [[1,0],[0,0]]})");
  });
  check_throws_code(errc::parse_error, [] {
    lucheck::parse_state(R"({"dims": [1], "amplitudes": [[1,0]]})");
  });
  check_throws_code(errc::parse_error, [] {
    lucheck::parse_state(R"({"dims": [2.5], "amplitudes": [[1,0],[0,0]]})");
  });
  // wrong amplitude count
  check_throws_code(errc::parse_error, [] {
    lucheck::parse_state(R"({"dims": [2,2], "amplitudes": [[1,0]]})");
  });
  // entries must be [re, im] pairs
  check_throws_code(errc::parse_error, [] {
    lucheck::parse_state(R"({"dims": [2], "amplitudes": [1, 0]})");
  });
  check_throws_code(errc::parse_error, [] {
    lucheck::parse_state(R"({"dims": [2], "amplitudes": [[1,0],[0]]})");
  });
  check_throws_code(errc::parse_error, [] {
    lucheck::parse_state(
        R"({"dims": [2], "amplitudes": [[1,0],[0,0]], "label": 7})");
  });
  check_throws_code(errc::parse_error, [] {
    lucheck::parse_state(
        R"({"dims": [2], "amplitudes": [[1,0],[0,0]], "extra": true})");
  });
  // structurally fine but physically empty
  check_throws_code(errc::zero_state, [] {
    lucheck::parse_state(R"({"dims": [2], "amplitudes": [[0,0],[0,0]]})");
  });
}

TEST_CASE("fixture files load with the expected outcomes") {
  PureState ghz = lucheck::load_state(testutil::data_path("ghz.json"));
  CHECK(ghz.dims() == std::vector<int>{2, 2, 2});
  check_throws_code(errc::parse_error, [] {
    lucheck::load_state(testutil::data_path("truncated.json"));
  });
  check_throws_code(errc::io_error, [] {
    lucheck::load_state(testutil::data_path("no_such_file.json"));
  });
}

TEST_CASE("witness serialization round trips bitwise") {
  LocalUnitaryTuple u = lucheck::random_local_unitary_tuple({2, 3}, 77);
  std::string text = lucheck::witness_to_json(u);
  LocalUnitaryTuple back = lucheck::parse_witness(text, 1e-10);
  REQUIRE(back.num_parties() == 2);
  for (int k = 0; k < 2; ++k) CHECK(back.factor(k) == u.factor(k));
}

TEST_CASE("witnesses can be pulled out of a full report") {
  PureState ghz = lucheck::ghz_state(3, 2);
  LocalUnitaryTuple u = lucheck::random_local_unitary_tuple({2, 2, 2}, 5005);
  PureState rotated = lucheck::apply_tuple(ghz, u);
  lucheck::Verdict v = lucheck::decide_lu_equivalence(ghz, rotated, Config{});
  REQUIRE(v.witness.has_value());
  std::string report = lucheck::verdict_report(v, "check");

  LocalUnitaryTuple w = lucheck::parse_witness(report, 1e-8);
  CHECK(lucheck::verify_witness(ghz, rotated, w, 1e-6));

  // A report whose verdict has no witness cannot provide one.
  lucheck::Verdict no = lucheck::decide_lu_equivalence(
      ghz, lucheck::w_state(3), Config{});
  CHECK_FALSE(no.witness.has_value());
  std::string no_report = lucheck::verdict_report(no, "check");
  check_throws_code(errc::parse_error,
                    [&] { lucheck::parse_witness(no_report, 1e-8); });
}

TEST_CASE("witness parsing validates shape and unitarity") {
  check_throws_code(errc::parse_error,
                    [] { lucheck::parse_witness("nonsense", 1e-10); });
  check_throws_code(errc::parse_error,
                    [] { lucheck::parse_witness(R"({"matrices": []})", 1e-10); });
  check_throws_code(errc::parse_error, [] {
    lucheck::parse_witness(R"({"matrices": [[[ [1,0] ],[ [0,0] ]]]})", 1e-10);
  });
  // Valid JSON, square matrix, but not unitary.
  check_throws_code(errc::non_unitary_witness, [] {
    lucheck::parse_witness(
        R"({"matrices": [[[[2,0],[0,0]],[[0,0],[2,0]]]]})", 1e-10);
  });
}

TEST_CASE("config parsing: defaults, overrides, round trip, rejection") {
  Config def;
  for (const char* text : {"", "   \n\t", "null"}) {
    Config c = lucheck::parse_config(text);
    CHECK(c.tol.eps_gap == def.tol.eps_gap);
    CHECK(c.search.restarts == def.search.restarts);
    CHECK(c.search.seed == def.search.seed);
  }

  Config c = lucheck::parse_config(
      R"({"eps_gap": 1e-6, "restarts": 3, "seed": 99, "max_sweeps": 17})");
  CHECK(c.tol.eps_gap == 1e-6);
  CHECK(c.search.restarts == 3);
  CHECK(c.search.max_sweeps == 17);
  CHECK(c.search.seed == 99);
  CHECK(c.tol.eps_eq == def.tol.eps_eq);  // untouched keys keep defaults

  Config mod;
  mod.tol.eps_opt = 2.5e-7;
  mod.search.seed = 1234567890123ULL;
  Config back = lucheck::parse_config(lucheck::config_to_json(mod));
  CHECK(back.tol.eps_opt == mod.tol.eps_opt);
  CHECK(back.search.seed == mod.search.seed);
  CHECK(back.tol.rank_tol == mod.tol.rank_tol);

  // Every failure mode maps to the configuration error category.
  for (const char* bad : {
           "{ not json",
           "[1, 2]",
           R"({"epz_gap": 1e-6})",
           R"({"eps_eq": 1.0})",
           R"({"eps_gap": -1e-9})",
           R"({"eps_gap": "tight"})",
           R"({"restarts": 0})",
           R"({"restarts": 2.5})",
           R"({"max_sweeps": 2000000})",
           R"({"seed": -4})",
           R"({"seed": 1.5})",
       }) {
    CAPTURE(bad);
    check_throws_code(errc::config_invalid,
                      [&] { lucheck::parse_config(bad); });
  }
}

TEST_CASE("verdict reports embed the envelope and the exit code") {
  PureState a = lucheck::random_haar_state({2, 2}, 21);
  lucheck::Verdict eq = lucheck::decide_lu_equivalence(a, a, Config{});
  json j = json::parse(lucheck::verdict_report(eq, "check"));
  CHECK(j["tool"] == "lucheck");
  CHECK(j["version"] == "0.1.0");
  CHECK(j["command"] == "check");
  CHECK(j["config"]["seed"] == 42);  // default seed echoed
  CHECK(j["exit_code"] == 0);
  CHECK(j["verdict"]["kind"] == "Equivalent");
  CHECK(j["verdict"]["witness"].is_object());
  CHECK(j["verdict"]["witness_overlap"].get<double>() >= 1.0 - 1e-9);
  CHECK(j["verdict"]["spectra"]["v1"].size() == 2);

  lucheck::Verdict ne = lucheck::decide_lu_equivalence(
      lucheck::ghz_state(3, 2), lucheck::w_state(3), Config{});
  json jn = json::parse(lucheck::verdict_report(ne, "check"));
  CHECK(jn["exit_code"] == 1);
  CHECK(jn["verdict"]["kind"] == "NotEquivalent");
  CHECK(jn["verdict"]["stage"] == "SpectraMismatch");
  CHECK(jn["verdict"]["witness"].is_null());
  CHECK(jn["verdict"]["dimensions"].is_null());

  lucheck::Verdict un = lucheck::decide_lu_equivalence(
      lucheck::ghz_state(4, 2), testutil::double_bell_state(), Config{});
  json ju = json::parse(lucheck::verdict_report(un, "check"));
  CHECK(ju["exit_code"] == 2);
  CHECK(ju["verdict"]["kind"] == "Undecided");
  CHECK(ju["verdict"]["dimensions"]["fiber_covered"] == false);
  CHECK(ju["verdict"]["search"]["status"] == "NumericallyUnmatched");
  CHECK(ju["verdict"]["search"]["sweep_overlaps"].is_array());
}

TEST_CASE("auxiliary reports carry their payloads and exit code zero") {
  Config cfg;
  PureState w = lucheck::w_state(3);

  json sp = json::parse(lucheck::spectra_report(w, cfg));
  CHECK(sp["command"] == "spectra");
  CHECK(sp["exit_code"] == 0);
  REQUIRE(sp["parties"].size() == 3);
  CHECK(sp["parties"][0]["eigenvalues"][0].get<double>() ==
        doctest::Approx(2.0 / 3.0));
  CHECK(sp["parties"][0]["clusters"].size() == 2);

  auto form = lucheck::canonicalize(lucheck::random_haar_state({2, 3}, 3), 1e-8);
  json ca = json::parse(lucheck::canonical_report(form, cfg));
  CHECK(ca["command"] == "canon");
  CHECK(ca["max_offdiag"].get<double>() <= 1e-12);
  CHECK(ca["transform"]["matrices"].size() == 2);

  auto rep = lucheck::dimensions_report(lucheck::ghz_state(3, 2), 1e-8, 1e-10);
  json di = json::parse(lucheck::dimensions_report_json(rep, cfg));
  CHECK(di["dimensions"]["ambient"] == 14);
  CHECK(di["dimensions"]["dim_orbit"] == 7);
  CHECK(di["dimensions"]["fiber_covered"] == true);

  auto dist = lucheck::decide_distinguishability(testutil::qutrit_psi(),
                                                 testutil::qutrit_phi(), cfg);
  json ind = json::parse(lucheck::distinguishability_report(dist));
  CHECK(ind["indistinguishable"] == true);
  CHECK(ind["exit_code"] == 0);

  json ver = json::parse(lucheck::verify_report(false, 0.25, cfg));
  CHECK(ver["verified"] == false);
  CHECK(ver["overlap"] == doctest::Approx(0.25));
  CHECK(ver["exit_code"] == 1);
}

TEST_CASE("text file helpers surface IO failures") {
  TempFile f("text.txt");
  lucheck::write_text_file(f.str(), "contents\n");
  CHECK(lucheck::read_text_file(f.str()) == "contents\n");
  check_throws_code(errc::io_error, [] {
    lucheck::read_text_file("/nonexistent/dir/file.txt");
  });
  check_throws_code(errc::io_error, [] {
    lucheck::write_text_file("/nonexistent/dir/file.txt", "x");
  });
}
