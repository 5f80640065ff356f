#pragma once

#include <stdexcept>
#include <string>

namespace lucheck {

// Failure categories carried by every lucheck exception.  The C boundary in
// lucheck.h maps these onto stable integer status codes.
enum class errc {
  dimension_mismatch,   // party dimensions disagree between operands
  zero_state,           // amplitude vector has zero norm
  invalid_state,        // non-finite amplitudes, empty dims, d_k < 2, ...
  party_out_of_range,   // party index outside [0, num_parties)
  eigensolver_failure,  // dense eigendecomposition did not converge
  not_generic,          // operation requires all spectral clusters of size 1
  config_invalid,       // bad tolerance/search configuration
  shape_mismatch,       // operator or tuple shapes do not fit the state
  non_unitary_witness,  // claimed witness fails the unitarity bound
  inconsistent_ranks,   // independent rank computations disagree
  parse_error,          // malformed state/witness/config text
  io_error              // file could not be read or written
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace lucheck
