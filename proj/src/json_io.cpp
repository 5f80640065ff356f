#include "lucheck/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "lucheck/version.hpp"

namespace lucheck {

namespace {

using njson = nlohmann::ordered_json;

njson parse_text(const std::string& text, errc code) {
  try {
    return njson::parse(text);
  } catch (const std::exception& e) {
    fail(code, std::string("invalid JSON: ") + e.what());
  }
}

void require_object(const njson& j, const char* what, errc code) {
  if (!j.is_object()) fail(code, std::string(what) + " must be a JSON object");
}

const njson* find(const njson& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const njson& require(const njson& j, const char* key, errc code) {
  const njson* p = find(j, key);
  if (!p) fail(code, std::string("missing key '") + key + "'");
  return *p;
}

void reject_unknown(const njson& j, std::initializer_list<const char*> allowed,
                    const char* what, errc code) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known)
      fail(code, std::string("unknown key '") + item.key() + "' in " + what);
  }
}

double as_double(const njson& j, const char* what, errc code) {
  if (!j.is_number()) fail(code, std::string(what) + " must be a number");
  double x = j.get<double>();
  if (!std::isfinite(x)) fail(code, std::string(what) + " must be finite");
  return x;
}

long long as_integer(const njson& j, const char* what, errc code) {
  if (!j.is_number_integer())
    fail(code, std::string(what) + " must be an integer");
  return j.get<long long>();
}

cplx as_complex(const njson& j, const char* what, errc code) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(code, std::string(what) + " must be a [re, im] pair");
  return cplx(j[0].get<double>(), j[1].get<double>());
}

njson complex_json(const cplx& z) { return njson::array({z.real(), z.imag()}); }

njson vector_json(const Eigen::VectorXd& v) {
  njson out = njson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

njson matrices_json(const LocalUnitaryTuple& u) {
  njson mats = njson::array();
  for (const Eigen::MatrixXcd& m : u.factors()) {
    njson rows = njson::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      njson row = njson::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        row.push_back(complex_json(m(r, c)));
      rows.push_back(std::move(row));
    }
    mats.push_back(std::move(rows));
  }
  return mats;
}

njson config_json(const Config& cfg) {
  njson j;
  j["eps_unitary"] = cfg.tol.eps_unitary;
  j["eps_gap"] = cfg.tol.eps_gap;
  j["eps_spec"] = cfg.tol.eps_spec;
  j["eps_eq"] = cfg.tol.eps_eq;
  j["eps_opt"] = cfg.tol.eps_opt;
  j["eps_mod"] = cfg.tol.eps_mod;
  j["eps_phase"] = cfg.tol.eps_phase;
  j["eps_diag"] = cfg.tol.eps_diag;
  j["rank_tol"] = cfg.tol.rank_tol;
  j["restarts"] = cfg.search.restarts;
  j["max_sweeps"] = cfg.search.max_sweeps;
  j["conv_delta"] = cfg.search.conv_delta;
  j["seed"] = cfg.search.seed;
  return j;
}

njson envelope(const char* command, const Config& cfg) {
  njson j;
  j["tool"] = kToolName;
  j["version"] = kVersionString;
  j["command"] = command;
  j["config"] = config_json(cfg);
  return j;
}

njson spectra_parties_json(const std::vector<SpectralData>& spectra) {
  njson parties = njson::array();
  for (const SpectralData& data : spectra) {
    njson p;
    p["party"] = data.party;
    p["eigenvalues"] = vector_json(data.eigenvalues);
    njson clusters = njson::array();
    for (const Cluster& c : data.clusters)
      clusters.push_back({{"value", c.value}, {"multiplicity", c.multiplicity}});
    p["clusters"] = std::move(clusters);
    parties.push_back(std::move(p));
  }
  return parties;
}

njson dimensions_json(const DimensionsReport& rep) {
  njson j;
  j["ambient"] = rep.ambient;
  j["dim_orbit"] = rep.dim_orbit;
  j["dim_kernel"] = rep.dim_kernel;
  j["dim_stab_state"] = rep.dim_stab_state;
  j["dim_stab_moment"] = rep.dim_stab_moment;
  j["dim_fiber_in_orbit"] = rep.dim_fiber_in_orbit;
  j["fiber_covered"] = rep.fiber_covered;
  j["rank_tol"] = rep.rank_tol;
  return j;
}

njson match_json(const MatchResult& m) {
  njson j;
  switch (m.status) {
    case MatchStatus::Matched: j["status"] = "Matched"; break;
    case MatchStatus::RuledOut: j["status"] = "RuledOut"; break;
    case MatchStatus::NumericallyUnmatched:
      j["status"] = "NumericallyUnmatched";
      break;
  }
  j["overlap"] = m.overlap;
  j["detail"] = m.detail;
  j["modulus_deviation"] = m.modulus_deviation;
  j["phase_residual"] = m.phase_residual;
  j["winning_restart"] = m.winning_restart;
  j["max_sweep_regression"] = m.max_sweep_regression;
  j["sweep_overlaps"] = m.sweep_overlaps;
  return j;
}

std::string dump(const njson& j) { return j.dump(2) + "\n"; }

}  // namespace

PureState parse_state(const std::string& json_text) {
  njson j = parse_text(json_text, errc::parse_error);
  require_object(j, "state", errc::parse_error);
  reject_unknown(j, {"dims", "amplitudes", "label"}, "state", errc::parse_error);

  const njson& jd = require(j, "dims", errc::parse_error);
  if (!jd.is_array() || jd.empty())
    fail(errc::parse_error, "'dims' must be a non-empty array");
  std::vector<int> dims;
  long long total = 1;
  for (const njson& d : jd) {
    long long v = as_integer(d, "'dims' entry", errc::parse_error);
    if (v < 2 || v > (1 << 20))
      fail(errc::parse_error, "'dims' entries must be integers >= 2");
    dims.push_back(static_cast<int>(v));
    total *= v;
    if (total > (1LL << 24))
      fail(errc::parse_error, "state too large for dense storage");
  }

  const njson& ja = require(j, "amplitudes", errc::parse_error);
  if (!ja.is_array())
    fail(errc::parse_error, "'amplitudes' must be an array of [re, im] pairs");
  if (static_cast<long long>(ja.size()) != total) {
    std::ostringstream msg;
    msg << "'amplitudes' has " << ja.size() << " entries, expected " << total;
    fail(errc::parse_error, msg.str());
  }
  Eigen::VectorXcd amps(total);
  for (long long i = 0; i < total; ++i)
    amps[i] = as_complex(ja[static_cast<std::size_t>(i)], "'amplitudes' entry",
                         errc::parse_error);

  PureState state(std::move(dims), std::move(amps));
  if (const njson* lbl = find(j, "label")) {
    if (!lbl->is_string()) fail(errc::parse_error, "'label' must be a string");
    state.set_label(lbl->get<std::string>());
  }
  return state;
}

PureState load_state(const std::string& path) {
  return parse_state(read_text_file(path));
}

std::string state_to_json(const PureState& v) {
  njson j;
  j["dims"] = v.dims();
  njson amps = njson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    amps.push_back(complex_json(v.amplitudes()[i]));
  j["amplitudes"] = std::move(amps);
  if (!v.label().empty()) j["label"] = v.label();
  return dump(j);
}

void save_state(const PureState& v, const std::string& path) {
  write_text_file(path, state_to_json(v));
}

std::string witness_to_json(const LocalUnitaryTuple& u) {
  njson j;
  j["matrices"] = matrices_json(u);
  return dump(j);
}

LocalUnitaryTuple parse_witness(const std::string& json_text,
                                double eps_unitary) {
  njson j = parse_text(json_text, errc::parse_error);
  require_object(j, "witness", errc::parse_error);

  const njson* mats = find(j, "matrices");
  if (!mats) {
    // Accept a full report and pull out the embedded witness.
    const njson* node = find(j, "verdict");
    if (node) node = find(*node, "witness");
    if (!node) node = find(j, "witness");
    if (!node || node->is_null())
      fail(errc::parse_error, "no witness found: expected 'matrices', or a "
                              "report with verdict.witness");
    require_object(*node, "witness", errc::parse_error);
    mats = find(*node, "matrices");
    if (!mats) fail(errc::parse_error, "witness is missing 'matrices'");
  }

  if (!mats->is_array() || mats->empty())
    fail(errc::parse_error, "'matrices' must be a non-empty array");
  std::vector<Eigen::MatrixXcd> factors;
  for (const njson& jm : *mats) {
    if (!jm.is_array() || jm.empty())
      fail(errc::parse_error, "each witness matrix must be an array of rows");
    const Eigen::Index d = static_cast<Eigen::Index>(jm.size());
    Eigen::MatrixXcd m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      const njson& row = jm[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d)
        fail(errc::parse_error, "witness matrices must be square");
      for (Eigen::Index c = 0; c < d; ++c)
        m(r, c) = as_complex(row[static_cast<std::size_t>(c)],
                             "witness entry", errc::parse_error);
    }
    factors.push_back(std::move(m));
  }
  return LocalUnitaryTuple(std::move(factors), eps_unitary);
}

Config parse_config(const std::string& json_text) {
  Config cfg;
  if (json_text.find_first_not_of(" \t\r\n") == std::string::npos) return cfg;
  njson j = parse_text(json_text, errc::config_invalid);
  if (j.is_null()) return cfg;
  require_object(j, "config", errc::config_invalid);
  reject_unknown(j,
                 {"eps_unitary", "eps_gap", "eps_spec", "eps_eq", "eps_opt",
                  "eps_mod", "eps_phase", "eps_diag", "rank_tol", "restarts",
                  "max_sweeps", "conv_delta", "seed"},
                 "config", errc::config_invalid);

  auto tol = [&](const char* key, double& slot, bool below_one) {
    const njson* p = find(j, key);
    if (!p) return;
    double x = as_double(*p, key, errc::config_invalid);
    if (x < 0.0 || (below_one && x >= 1.0))
      fail(errc::config_invalid,
           std::string(key) + (below_one ? " must be in [0, 1)"
                                         : " must be >= 0"));
    slot = x;
  };
  tol("eps_unitary", cfg.tol.eps_unitary, false);
  tol("eps_gap", cfg.tol.eps_gap, false);
  tol("eps_spec", cfg.tol.eps_spec, false);
  tol("eps_eq", cfg.tol.eps_eq, true);
  tol("eps_opt", cfg.tol.eps_opt, true);
  tol("eps_mod", cfg.tol.eps_mod, false);
  tol("eps_phase", cfg.tol.eps_phase, false);
  tol("eps_diag", cfg.tol.eps_diag, false);
  tol("rank_tol", cfg.tol.rank_tol, false);
  tol("conv_delta", cfg.search.conv_delta, false);

  auto count = [&](const char* key, int& slot) {
    const njson* p = find(j, key);
    if (!p) return;
    long long v = as_integer(*p, key, errc::config_invalid);
    if (v < 1 || v > 1000000)
      fail(errc::config_invalid,
           std::string(key) + " must be an integer in [1, 1000000]");
    slot = static_cast<int>(v);
  };
  count("restarts", cfg.search.restarts);
  count("max_sweeps", cfg.search.max_sweeps);

  if (const njson* p = find(j, "seed")) {
    if (!p->is_number_unsigned())
      fail(errc::config_invalid, "seed must be a non-negative integer");
    cfg.search.seed = p->get<std::uint64_t>();
  }
  return cfg;
}

std::string config_to_json(const Config& cfg) { return dump(config_json(cfg)); }

std::string verdict_report(const Verdict& v, const std::string& command) {
  njson j = envelope(command.c_str(), v.cfg);
  njson jv;
  jv["kind"] = to_string(v.kind);
  jv["stage"] = to_string(v.stage);
  if (v.witness) {
    jv["witness"] = njson{{"matrices", matrices_json(*v.witness)}};
    jv["witness_overlap"] = v.witness_overlap;
  } else {
    jv["witness"] = nullptr;
  }

  njson spectra;
  njson s1 = njson::array(), s2 = njson::array();
  for (const Eigen::VectorXd& s : v.spectra_v1) s1.push_back(vector_json(s));
  for (const Eigen::VectorXd& s : v.spectra_v2) s2.push_back(vector_json(s));
  spectra["v1"] = std::move(s1);
  spectra["v2"] = std::move(s2);
  spectra["match"] = v.spectra_match_flags;
  spectra["max_deviation"] = v.spectra_max_deviation;
  jv["spectra"] = std::move(spectra);

  jv["canonical_overlap"] = v.canonical_overlap;
  jv["dimensions"] = v.dims ? dimensions_json(*v.dims) : njson(nullptr);
  jv["search"] = v.match ? match_json(*v.match) : njson(nullptr);
  j["verdict"] = std::move(jv);

  int exit_code = 2;
  if (v.kind == VerdictKind::Equivalent) exit_code = 0;
  if (v.kind == VerdictKind::NotEquivalent) exit_code = 1;
  j["exit_code"] = exit_code;
  return dump(j);
}

std::string spectra_report(const PureState& v, const Config& cfg) {
  njson j = envelope("spectra", cfg);
  j["dims"] = v.dims();
  if (!v.label().empty()) j["label"] = v.label();
  PureState n = v.normalized();
  std::vector<SpectralData> spectra;
  for (int k = 0; k < v.num_parties(); ++k)
    spectra.push_back(spectral_data(n, k, cfg.tol.eps_gap));
  j["parties"] = spectra_parties_json(spectra);
  j["exit_code"] = 0;
  return dump(j);
}

std::string canonical_report(const CanonicalForm& form, const Config& cfg) {
  njson j = envelope("canon", cfg);
  j["dims"] = form.state.dims();
  j["parties"] = spectra_parties_json(form.spectra);
  j["transform"] = njson{{"matrices", matrices_json(form.transform)}};

  double max_offdiag = 0.0;
  PureState n = form.state.normalized();
  for (int k = 0; k < form.state.num_parties(); ++k) {
    Eigen::MatrixXcd c = reduced_matrix(n, k);
    c.diagonal().setZero();
    max_offdiag = std::max(max_offdiag, c.cwiseAbs().maxCoeff());
  }
  j["max_offdiag"] = max_offdiag;
  j["exit_code"] = 0;
  return dump(j);
}

std::string dimensions_report_json(const DimensionsReport& rep,
                                   const Config& cfg) {
  njson j = envelope("dims", cfg);
  j["dimensions"] = dimensions_json(rep);
  j["exit_code"] = 0;
  return dump(j);
}

std::string distinguishability_report(const DistinguishabilityReport& rep) {
  njson j = envelope("indist", rep.cfg);
  j["indistinguishable"] = rep.raw_indistinguishable;
  j["spectra_equal"] = rep.canonical_spectra_equal;
  j["per_party_spectra_match"] = rep.per_party_spectra;
  j["max_reduced_deviation"] = rep.max_reduced_deviation;
  j["max_spectra_deviation"] = rep.max_spectra_deviation;
  j["exit_code"] = rep.raw_indistinguishable ? 0 : 1;
  return dump(j);
}

std::string verify_report(bool ok, double overlap, const Config& cfg) {
  njson j = envelope("verify", cfg);
  j["verified"] = ok;
  j["overlap"] = overlap;
  j["exit_code"] = ok ? 0 : 1;
  return dump(j);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(errc::io_error, "read failed for '" + path + "'");
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) fail(errc::io_error, "write failed for '" + path + "'");
}

}  // namespace lucheck
