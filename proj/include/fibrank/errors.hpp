// Typed error conditions shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace fibrank {

enum class Errc {
  bad_prime,
  malformed_config,
  degenerate_family,
  singular_fiber,
  parity_violation,
  out_of_order_prime,
  insufficient_data,
  hypothesis_not_asserted,
  inconsistent_ledger,
  over_determined,
  mismatch_bug,
  corrupt_artifact,
  io_failure,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

const char* errc_name(Errc code) noexcept;

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace fibrank
