// lucheck command-line front end.  Talks to the library exclusively through
// the C API; result JSON is parsed here only to render the human summaries.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lucheck.h"

namespace {

using njson = nlohmann::json;

constexpr int kExitConfig = 13;
constexpr int kExitIo = 14;

struct StateGuard {
  lucheck_state_t* p = nullptr;
  ~StateGuard() { lucheck_state_free(p); }
  lucheck_state_t** slot() { return &p; }
};

struct ResultGuard {
  lucheck_result_t* p = nullptr;
  ~ResultGuard() { lucheck_result_free(p); }
  lucheck_result_t** slot() { return &p; }
};

int report_failure(lucheck_status st) {
  std::cerr << "lucheck: error: " << lucheck_last_error() << "\n";
  return static_cast<int>(st);
}

std::string fmt(double x, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, x);
  return buf;
}

std::string dims_string(const njson& dims) {
  std::string s;
  for (const auto& d : dims) {
    if (!s.empty()) s += "x";
    s += std::to_string(d.get<int>());
  }
  return s;
}

// Options shared by the deciding subcommands, forwarded as config JSON only
// when set so library defaults stay authoritative.
struct CommonOpts {
  double tol_spec = 0, tol_eq = 0, tol_opt = 0, gap = 0, rank_tol = 0;
  int restarts = 0, sweeps = 0;
  std::uint64_t seed = 0;
  std::string json_out;

  CLI::Option *o_spec = nullptr, *o_eq = nullptr, *o_opt = nullptr,
              *o_gap = nullptr, *o_rank = nullptr, *o_restarts = nullptr,
              *o_sweeps = nullptr, *o_seed = nullptr;

  void attach(CLI::App* cmd, bool search_opts, bool rank_opts) {
    o_spec = cmd->add_option("--tol-spec", tol_spec,
                             "spectra comparison tolerance");
    o_eq = cmd->add_option("--tol-eq", tol_eq,
                           "projective equality tolerance");
    o_gap = cmd->add_option("--gap", gap, "eigenvalue cluster gap");
    if (search_opts) {
      o_opt = cmd->add_option("--tol-opt", tol_opt,
                              "search acceptance tolerance (overlap >= 1-tol)");
      o_restarts = cmd->add_option("--restarts", restarts, "search restarts")
                       ->check(CLI::PositiveNumber);
      o_sweeps = cmd->add_option("--sweeps", sweeps, "max sweeps per restart")
                     ->check(CLI::PositiveNumber);
      o_seed = cmd->add_option("--seed", seed, "search seed");
    }
    if (rank_opts)
      o_rank = cmd->add_option("--rank-tol", rank_tol,
                               "relative rank cutoff for geometry");
    cmd->add_option("--json", json_out,
                    "write the JSON report to this path ('-' for stdout)");
  }

  std::string config_json() const {
    njson j = njson::object();
    if (o_spec && o_spec->count()) j["eps_spec"] = tol_spec;
    if (o_eq && o_eq->count()) j["eps_eq"] = tol_eq;
    if (o_opt && o_opt->count()) j["eps_opt"] = tol_opt;
    if (o_gap && o_gap->count()) j["eps_gap"] = gap;
    if (o_rank && o_rank->count()) j["rank_tol"] = rank_tol;
    if (o_restarts && o_restarts->count()) j["restarts"] = restarts;
    if (o_sweeps && o_sweeps->count()) j["max_sweeps"] = sweeps;
    if (o_seed && o_seed->count()) j["seed"] = seed;
    return j.dump();
  }
};

int load_state_or_fail(const std::string& path, StateGuard& g) {
  lucheck_status st = lucheck_state_load(path.c_str(), g.slot());
  if (st != LUCHECK_OK) return report_failure(st);
  return 0;
}

// Returns the parsed report and handles --json.  Empty optional on IO failure.
std::optional<njson> deliver_report(const lucheck_result_t* r,
                                    const std::string& json_out,
                                    bool& human_output) {
  const char* text = lucheck_result_json(r);
  human_output = true;
  if (json_out == "-") {
    std::cout << text;
    human_output = false;
  } else if (!json_out.empty()) {
    std::ofstream out(json_out, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) {
      std::cerr << "lucheck: error: cannot write '" << json_out << "'\n";
      return std::nullopt;
    }
  }
  return njson::parse(text);
}

void print_spectra_parties(const njson& parties) {
  for (const auto& p : parties) {
    std::cout << "  party " << p["party"].get<int>() << ":";
    for (const auto& ev : p["eigenvalues"])
      std::cout << " " << fmt(ev.get<double>(), "%.8g");
    std::cout << "   clusters:";
    for (const auto& c : p["clusters"])
      std::cout << " " << c["multiplicity"].get<int>() << "@"
                << fmt(c["value"].get<double>(), "%.6g");
    std::cout << "\n";
  }
}

void print_dimensions(const njson& d) {
  std::cout << "  ambient " << d["ambient"].get<long long>() << ", orbit "
            << d["dim_orbit"].get<int>() << ", kernel "
            << d["dim_kernel"].get<int>() << "\n"
            << "  stabilizer: state " << d["dim_stab_state"].get<int>()
            << ", moment " << d["dim_stab_moment"].get<int>()
            << ", fiber in orbit " << d["dim_fiber_in_orbit"].get<int>()
            << "\n"
            << "  fiber covered: "
            << (d["fiber_covered"].get<bool>() ? "yes" : "no") << "\n";
}

void print_search(const njson& s) {
  std::cout << "  search: " << s["status"].get<std::string>() << ", overlap "
            << fmt(s["overlap"].get<double>(), "%.12g");
  int restart = s["winning_restart"].get<int>();
  if (restart >= 0)
    std::cout << ", restart " << restart << ", sweeps "
              << s["sweep_overlaps"].size();
  std::cout << "\n";
  std::string detail = s["detail"].get<std::string>();
  if (!detail.empty()) std::cout << "  detail: " << detail << "\n";
}

int run_check(const std::string& a_path, const std::string& b_path,
              const CommonOpts& opts) {
  StateGuard a, b;
  if (int rc = load_state_or_fail(a_path, a)) return rc;
  if (int rc = load_state_or_fail(b_path, b)) return rc;

  ResultGuard r;
  lucheck_status st =
      lucheck_check(a.p, b.p, opts.config_json().c_str(), r.slot());
  if (st != LUCHECK_OK) return report_failure(st);

  bool human = true;
  auto rep = deliver_report(r.p, opts.json_out, human);
  if (!rep) return kExitIo;
  if (human) {
    const njson& v = (*rep)["verdict"];
    std::cout << "verdict: " << v["kind"].get<std::string>() << " (stage "
              << v["stage"].get<std::string>() << ")\n";
    const njson& sp = v["spectra"];
    std::cout << "spectra: ";
    bool all = true;
    for (const auto& f : sp["match"]) all = all && f.get<bool>();
    std::cout << (all ? "match" : "mismatch") << " (max deviation "
              << fmt(sp["max_deviation"].get<double>(), "%.3g") << ")\n";
    std::cout << "canonical overlap: "
              << fmt(v["canonical_overlap"].get<double>(), "%.12g") << "\n";
    if (!v["dimensions"].is_null()) print_dimensions(v["dimensions"]);
    if (!v["search"].is_null()) print_search(v["search"]);
    if (!v["witness"].is_null())
      std::cout << "witness overlap: "
                << fmt(v["witness_overlap"].get<double>(), "%.12g") << "\n";
    std::cout << "seed: " << (*rep)["config"]["seed"].get<std::uint64_t>()
              << "\n";
  }
  return lucheck_result_exit_code(r.p);
}

int run_spectra(const std::string& a_path, const CommonOpts& opts) {
  StateGuard a;
  if (int rc = load_state_or_fail(a_path, a)) return rc;
  ResultGuard r;
  lucheck_status st =
      lucheck_spectra(a.p, opts.config_json().c_str(), r.slot());
  if (st != LUCHECK_OK) return report_failure(st);

  bool human = true;
  auto rep = deliver_report(r.p, opts.json_out, human);
  if (!rep) return kExitIo;
  if (human) {
    std::cout << "state: " << a_path << " ("
              << dims_string((*rep)["dims"]) << ")\n";
    print_spectra_parties((*rep)["parties"]);
  }
  return 0;
}

int run_canon(const std::string& a_path, const std::string& out_path,
              const CommonOpts& opts) {
  StateGuard a, canon;
  if (int rc = load_state_or_fail(a_path, a)) return rc;
  ResultGuard r;
  lucheck_status st = lucheck_canonicalize(a.p, opts.config_json().c_str(),
                                           canon.slot(), r.slot());
  if (st != LUCHECK_OK) return report_failure(st);

  if (!out_path.empty()) {
    st = lucheck_state_save(canon.p, out_path.c_str());
    if (st != LUCHECK_OK) return report_failure(st);
  }

  bool human = true;
  auto rep = deliver_report(r.p, opts.json_out, human);
  if (!rep) return kExitIo;
  if (human) {
    print_spectra_parties((*rep)["parties"]);
    std::cout << "max off-diagonal after rotation: "
              << fmt((*rep)["max_offdiag"].get<double>(), "%.3g") << "\n";
    if (!out_path.empty())
      std::cout << "canonical state written to " << out_path << "\n";
  }
  return 0;
}

int run_dims(const std::string& a_path, const CommonOpts& opts) {
  StateGuard a;
  if (int rc = load_state_or_fail(a_path, a)) return rc;
  ResultGuard r;
  lucheck_status st =
      lucheck_dimensions(a.p, opts.config_json().c_str(), r.slot());
  if (st != LUCHECK_OK) return report_failure(st);

  bool human = true;
  auto rep = deliver_report(r.p, opts.json_out, human);
  if (!rep) return kExitIo;
  if (human) print_dimensions((*rep)["dimensions"]);
  return 0;
}

int run_indist(const std::string& a_path, const std::string& b_path,
               const CommonOpts& opts) {
  StateGuard a, b;
  if (int rc = load_state_or_fail(a_path, a)) return rc;
  if (int rc = load_state_or_fail(b_path, b)) return rc;
  ResultGuard r;
  lucheck_status st = lucheck_indistinguishable(
      a.p, b.p, opts.config_json().c_str(), r.slot());
  if (st != LUCHECK_OK) return report_failure(st);

  bool human = true;
  auto rep = deliver_report(r.p, opts.json_out, human);
  if (!rep) return kExitIo;
  if (human) {
    bool raw = (*rep)["indistinguishable"].get<bool>();
    std::cout << "locally "
              << (raw ? "indistinguishable" : "distinguishable")
              << " as given (max reduced-matrix deviation "
              << fmt((*rep)["max_reduced_deviation"].get<double>(), "%.3g")
              << ")\n";
    std::cout << "sorted spectra "
              << ((*rep)["spectra_equal"].get<bool>() ? "agree" : "differ")
              << " per party (max deviation "
              << fmt((*rep)["max_spectra_deviation"].get<double>(), "%.3g")
              << ")\n";
  }
  return lucheck_result_exit_code(r.p);
}

int run_gen(const std::string& kind, const std::vector<int>& dims,
            std::uint64_t seed, const std::string& out_path) {
  std::vector<int32_t> d(dims.begin(), dims.end());
  StateGuard s;
  lucheck_status st = lucheck_state_generate(
      kind.c_str(), d.data(), static_cast<int32_t>(d.size()), seed, s.slot());
  if (st != LUCHECK_OK) return report_failure(st);

  if (!out_path.empty()) {
    st = lucheck_state_save(s.p, out_path.c_str());
    if (st != LUCHECK_OK) return report_failure(st);
    std::cout << "wrote " << out_path << " (kind " << kind << ", dims "
              << dims_string(njson(dims)) << ", seed " << seed << ")\n";
    return 0;
  }

  // No output file: emit the state JSON itself so the result can be piped.
  const int64_t n = lucheck_state_size(s.p);
  std::vector<double> amps(static_cast<std::size_t>(2 * n));
  st = lucheck_state_amplitudes(s.p, amps.data(), n);
  if (st != LUCHECK_OK) return report_failure(st);
  njson j;
  j["dims"] = dims;
  njson arr = njson::array();
  for (int64_t i = 0; i < n; ++i)
    arr.push_back(njson::array({amps[2 * i], amps[2 * i + 1]}));
  j["amplitudes"] = std::move(arr);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_verify(const std::string& a_path, const std::string& b_path,
               const std::string& witness_path, double tol,
               const std::string& json_out) {
  StateGuard a, b;
  if (int rc = load_state_or_fail(a_path, a)) return rc;
  if (int rc = load_state_or_fail(b_path, b)) return rc;

  std::ifstream in(witness_path, std::ios::binary);
  if (!in) {
    std::cerr << "lucheck: error: cannot open '" << witness_path << "'\n";
    return kExitIo;
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  njson cfg = njson::object();
  cfg["eps_eq"] = tol;
  ResultGuard r;
  lucheck_status st = lucheck_verify(a.p, b.p, buf.str().c_str(),
                                     cfg.dump().c_str(), r.slot());
  if (st != LUCHECK_OK) return report_failure(st);

  bool human = true;
  auto rep = deliver_report(r.p, json_out, human);
  if (!rep) return kExitIo;
  if (human) {
    bool ok = (*rep)["verified"].get<bool>();
    std::cout << (ok ? "verified" : "rejected") << ": overlap "
              << fmt((*rep)["overlap"].get<double>(), "%.12g")
              << " at tolerance " << fmt(tol, "%.3g") << "\n";
  }
  return lucheck_result_exit_code(r.p);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local-unitary equivalence and local distinguishability of "
               "multipartite pure states"};
  app.set_version_flag("--version", lucheck_version());
  app.require_subcommand(1);

  std::string a_path, b_path, out_path, witness_path, kind;
  std::vector<int> gen_dims;
  std::uint64_t gen_seed = 42;
  double verify_tol = 1e-6;
  std::string verify_json;

  CLI::App* check = app.add_subcommand(
      "check", "decide local-unitary equivalence of two states");
  check->add_option("a", a_path, "first state file")->required();
  check->add_option("b", b_path, "second state file")->required();
  CommonOpts check_opts;
  check_opts.attach(check, /*search=*/true, /*rank=*/true);

  CLI::App* spectra = app.add_subcommand(
      "spectra", "per-party reduced spectra and degeneracy clusters");
  spectra->add_option("a", a_path, "state file")->required();
  CommonOpts spectra_opts;
  spectra_opts.attach(spectra, false, false);

  CLI::App* canon =
      app.add_subcommand("canon", "rotate a state to its canonical form");
  canon->add_option("a", a_path, "state file")->required();
  canon->add_option("--out", out_path, "write the canonical state here");
  CommonOpts canon_opts;
  canon_opts.attach(canon, false, false);

  CLI::App* dims = app.add_subcommand(
      "dims", "orbit, kernel, and stabilizer dimensions at a state");
  dims->add_option("a", a_path, "state file")->required();
  CommonOpts dims_opts;
  dims_opts.attach(dims, false, true);

  CLI::App* indist = app.add_subcommand(
      "indist", "local distinguishability of two states");
  indist->add_option("a", a_path, "first state file")->required();
  indist->add_option("b", b_path, "second state file")->required();
  CommonOpts indist_opts;
  indist_opts.attach(indist, false, false);

  CLI::App* gen = app.add_subcommand("gen", "generate a named test state");
  gen->add_option("kind", kind, "haar | product | ghz | w")->required();
  gen->add_option("--dims", gen_dims, "local dimensions, e.g. 2,2,2")
      ->required()
      ->delimiter(',');
  gen->add_option("--seed", gen_seed, "generator seed (haar)");
  gen->add_option("--out", out_path, "output path (default: stdout)");

  CLI::App* verify = app.add_subcommand(
      "verify", "check that a witness maps the second state onto the first");
  verify->add_option("a", a_path, "first state file")->required();
  verify->add_option("b", b_path, "second state file")->required();
  verify->add_option("witness", witness_path,
                     "witness JSON (bare matrices or a check report)")
      ->required();
  verify->add_option("--tol", verify_tol, "projective equality tolerance");
  verify->add_option("--json", verify_json,
                     "write the JSON report to this path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (check->parsed()) return run_check(a_path, b_path, check_opts);
  if (spectra->parsed()) return run_spectra(a_path, spectra_opts);
  if (canon->parsed()) return run_canon(a_path, out_path, canon_opts);
  if (dims->parsed()) return run_dims(a_path, dims_opts);
  if (indist->parsed()) return run_indist(a_path, b_path, indist_opts);
  if (gen->parsed()) return run_gen(kind, gen_dims, gen_seed, out_path);
  if (verify->parsed())
    return run_verify(a_path, b_path, witness_path, verify_tol, verify_json);
  return kExitConfig;
}
