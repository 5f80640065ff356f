#include "lucheck.h"

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "lucheck/json_io.hpp"
#include "lucheck/pipeline.hpp"
#include "lucheck/version.hpp"

struct lucheck_state_t {
  lucheck::PureState state;
};

struct lucheck_result_t {
  std::string json;
  int32_t exit_code = 0;
};

namespace {

thread_local std::string g_last_error;

int32_t status_from(lucheck::errc c) {
  using lucheck::errc;
  switch (c) {
    case errc::parse_error:
    case errc::invalid_state:
    case errc::zero_state:
      return LUCHECK_ERR_PARSE;
    case errc::dimension_mismatch:
    case errc::party_out_of_range:
    case errc::shape_mismatch:
      return LUCHECK_ERR_DIMENSION;
    case errc::eigensolver_failure:
    case errc::inconsistent_ranks:
    case errc::not_generic:
    case errc::non_unitary_witness:
      return LUCHECK_ERR_NUMERIC;
    case errc::config_invalid:
      return LUCHECK_ERR_CONFIG;
    case errc::io_error:
      return LUCHECK_ERR_IO;
  }
  return LUCHECK_ERR_NUMERIC;
}

template <typename F>
lucheck_status guarded(F&& f) {
  try {
    f();
    return LUCHECK_OK;
  } catch (const lucheck::Error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LUCHECK_ERR_NUMERIC;
  } catch (...) {
    g_last_error = "unknown failure";
    return LUCHECK_ERR_NUMERIC;
  }
}

bool null_arg(const void* p, const char* name) {
  if (p) return false;
  g_last_error = std::string(name) + " must not be NULL";
  return true;
}

lucheck::Config config_from(const char* cfg_json) {
  return lucheck::parse_config(cfg_json ? cfg_json : "");
}

lucheck_result_t* make_result(std::string json, int32_t exit_code) {
  return new lucheck_result_t{std::move(json), exit_code};
}

int32_t verdict_exit_code(const lucheck::Verdict& v) {
  switch (v.kind) {
    case lucheck::VerdictKind::Equivalent: return 0;
    case lucheck::VerdictKind::NotEquivalent: return 1;
    case lucheck::VerdictKind::Undecided: return 2;
  }
  return 2;
}

}  // namespace

extern "C" {

const char* lucheck_version(void) { return lucheck::kVersionString; }

const char* lucheck_last_error(void) { return g_last_error.c_str(); }

lucheck_status lucheck_state_create(const int32_t* dims, int32_t nparties,
                                    const double* amps_re_im, int64_t namps,
                                    lucheck_state_t** out) {
  if (null_arg(dims, "dims") || null_arg(amps_re_im, "amps_re_im") ||
      null_arg(out, "out"))
    return LUCHECK_ERR_NULLPTR;
  return guarded([&] {
    if (nparties < 1)
      lucheck::fail(lucheck::errc::dimension_mismatch,
                    "nparties must be >= 1");
    std::vector<int> d(dims, dims + nparties);
    if (namps < 1)
      lucheck::fail(lucheck::errc::dimension_mismatch, "namps must be >= 1");
    Eigen::VectorXcd amps(namps);
    for (int64_t i = 0; i < namps; ++i)
      amps[i] = lucheck::cplx(amps_re_im[2 * i], amps_re_im[2 * i + 1]);
    *out = new lucheck_state_t{lucheck::PureState(std::move(d), std::move(amps))};
  });
}

lucheck_status lucheck_state_load(const char* path, lucheck_state_t** out) {
  if (null_arg(path, "path") || null_arg(out, "out"))
    return LUCHECK_ERR_NULLPTR;
  return guarded([&] {
    *out = new lucheck_state_t{lucheck::load_state(path)};
  });
}

lucheck_status lucheck_state_parse(const char* json_text,
                                   lucheck_state_t** out) {
  if (null_arg(json_text, "json_text") || null_arg(out, "out"))
    return LUCHECK_ERR_NULLPTR;
  return guarded([&] {
    *out = new lucheck_state_t{lucheck::parse_state(json_text)};
  });
}

lucheck_status lucheck_state_save(const lucheck_state_t* s, const char* path) {
  if (null_arg(s, "state") || null_arg(path, "path"))
    return LUCHECK_ERR_NULLPTR;
  return guarded([&] { lucheck::save_state(s->state, path); });
}

lucheck_status lucheck_state_generate(const char* kind, const int32_t* dims,
                                      int32_t nparties, uint64_t seed,
                                      lucheck_state_t** out) {
  if (null_arg(kind, "kind") || null_arg(dims, "dims") || null_arg(out, "out"))
    return LUCHECK_ERR_NULLPTR;
  return guarded([&] {
    if (nparties < 1)
      lucheck::fail(lucheck::errc::dimension_mismatch,
                    "nparties must be >= 1");
    std::vector<int> d(dims, dims + nparties);
    std::string k = kind;
    std::optional<lucheck::PureState> made;
    if (k == "haar") {
      made = lucheck::random_haar_state(d, seed);
    } else if (k == "product") {
      made = lucheck::basis_product_state(d);
    } else if (k == "ghz") {
      for (int di : d)
        if (di != d[0])
          lucheck::fail(lucheck::errc::dimension_mismatch,
                        "ghz requires equal local dimensions");
      made = lucheck::ghz_state(nparties, d[0]);
    } else if (k == "w") {
      for (int di : d)
        if (di != 2)
          lucheck::fail(lucheck::errc::dimension_mismatch, "w requires qubits");
      made = lucheck::w_state(nparties);
    } else {
      lucheck::fail(lucheck::errc::config_invalid,
                    "unknown kind '" + k + "': expected haar|product|ghz|w");
    }
    *out = new lucheck_state_t{std::move(*made)};
  });
}

int32_t lucheck_state_num_parties(const lucheck_state_t* s) {
  if (null_arg(s, "state")) return 0;
  return s->state.num_parties();
}

int64_t lucheck_state_size(const lucheck_state_t* s) {
  if (null_arg(s, "state")) return 0;
  return static_cast<int64_t>(s->state.size());
}

lucheck_status lucheck_state_dims(const lucheck_state_t* s, int32_t* out,
                                  int32_t cap) {
  if (null_arg(s, "state") || null_arg(out, "out"))
    return LUCHECK_ERR_NULLPTR;
  return guarded([&] {
    if (cap < s->state.num_parties())
      lucheck::fail(lucheck::errc::dimension_mismatch,
                    "dims capacity too small");
    for (int k = 0; k < s->state.num_parties(); ++k)
      out[k] = s->state.dims()[static_cast<std::size_t>(k)];
  });
}

lucheck_status lucheck_state_amplitudes(const lucheck_state_t* s,
                                        double* out_re_im, int64_t cap_pairs) {
  if (null_arg(s, "state") || null_arg(out_re_im, "out_re_im"))
    return LUCHECK_ERR_NULLPTR;
  return guarded([&] {
    if (cap_pairs < static_cast<int64_t>(s->state.size()))
      lucheck::fail(lucheck::errc::dimension_mismatch,
                    "amplitude capacity too small");
    const Eigen::VectorXcd& a = s->state.amplitudes();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      out_re_im[2 * i] = a[i].real();
      out_re_im[2 * i + 1] = a[i].imag();
    }
  });
}

void lucheck_state_free(lucheck_state_t* s) { delete s; }

lucheck_status lucheck_check(const lucheck_state_t* a, const lucheck_state_t* b,
                             const char* cfg_json, lucheck_result_t** out) {
  if (null_arg(a, "a") || null_arg(b, "b") || null_arg(out, "out"))
    return LUCHECK_ERR_NULLPTR;
  return guarded([&] {
    lucheck::Config cfg = config_from(cfg_json);
    lucheck::Verdict v = lucheck::decide_lu_equivalence(a->state, b->state, cfg);
    *out = make_result(lucheck::verdict_report(v, "check"), verdict_exit_code(v));
  });
}

lucheck_status lucheck_spectra(const lucheck_state_t* a, const char* cfg_json,
                               lucheck_result_t** out) {
  if (null_arg(a, "a") || null_arg(out, "out")) return LUCHECK_ERR_NULLPTR;
  return guarded([&] {
    lucheck::Config cfg = config_from(cfg_json);
    *out = make_result(lucheck::spectra_report(a->state, cfg), 0);
  });
}

lucheck_status lucheck_canonicalize(const lucheck_state_t* a,
                                    const char* cfg_json,
                                    lucheck_state_t** canon_out,
                                    lucheck_result_t** out) {
  if (null_arg(a, "a") || null_arg(canon_out, "canon_out") ||
      null_arg(out, "out"))
    return LUCHECK_ERR_NULLPTR;
  return guarded([&] {
    lucheck::Config cfg = config_from(cfg_json);
    lucheck::CanonicalForm form =
        lucheck::canonicalize(a->state, cfg.tol.eps_gap);
    std::string json = lucheck::canonical_report(form, cfg);
    *canon_out = new lucheck_state_t{std::move(form.state)};
    *out = make_result(std::move(json), 0);
  });
}

lucheck_status lucheck_dimensions(const lucheck_state_t* a,
                                  const char* cfg_json,
                                  lucheck_result_t** out) {
  if (null_arg(a, "a") || null_arg(out, "out")) return LUCHECK_ERR_NULLPTR;
  return guarded([&] {
    lucheck::Config cfg = config_from(cfg_json);
    lucheck::DimensionsReport rep =
        lucheck::dimensions_report(a->state, cfg.tol.eps_gap, cfg.tol.rank_tol);
    *out = make_result(lucheck::dimensions_report_json(rep, cfg), 0);
  });
}

lucheck_status lucheck_indistinguishable(const lucheck_state_t* a,
                                         const lucheck_state_t* b,
                                         const char* cfg_json,
                                         lucheck_result_t** out) {
  if (null_arg(a, "a") || null_arg(b, "b") || null_arg(out, "out"))
    return LUCHECK_ERR_NULLPTR;
  return guarded([&] {
    lucheck::Config cfg = config_from(cfg_json);
    lucheck::DistinguishabilityReport rep =
        lucheck::decide_distinguishability(a->state, b->state, cfg);
    *out = make_result(lucheck::distinguishability_report(rep),
                       rep.raw_indistinguishable ? 0 : 1);
  });
}

lucheck_status lucheck_verify(const lucheck_state_t* a, const lucheck_state_t* b,
                              const char* witness_json, const char* cfg_json,
                              lucheck_result_t** out) {
  if (null_arg(a, "a") || null_arg(b, "b") ||
      null_arg(witness_json, "witness_json") || null_arg(out, "out"))
    return LUCHECK_ERR_NULLPTR;
  return guarded([&] {
    lucheck::Config cfg = config_from(cfg_json);
    lucheck::LocalUnitaryTuple w =
        lucheck::parse_witness(witness_json, cfg.tol.eps_unitary);
    // eps_eq doubles as the verification tolerance so callers can widen it
    // for search-produced witnesses.
    bool ok = lucheck::verify_witness(a->state, b->state, w, cfg.tol.eps_eq);
    lucheck::PureState mapped = lucheck::apply_tuple(b->state, w);
    double overlap = std::abs(lucheck::inner(a->state, mapped)) /
                     (a->state.norm() * mapped.norm());
    *out = make_result(lucheck::verify_report(ok, overlap, cfg), ok ? 0 : 1);
  });
}

const char* lucheck_result_json(const lucheck_result_t* r) {
  if (null_arg(r, "result")) return "";
  return r->json.c_str();
}

int32_t lucheck_result_exit_code(const lucheck_result_t* r) {
  if (null_arg(r, "result")) return -1;
  return r->exit_code;
}

void lucheck_result_free(lucheck_result_t* r) { delete r; }

}  // extern "C"
