#pragma once

#include <stdexcept>
#include <string>

namespace relconj {

enum class Errc {
  unknown_symbol,
  malformed_token,
  alphabet_mismatch,
  handle_mismatch,
  index_out_of_range,
  factor_mismatch,
  unsupported_backend,
  resource_limit,
  missing_constant,
  degenerate_profile,
  length_mismatch,
  inconsistent_duplicates,
  not_a_conjugator,
  oracle_failure,
  oracle_unavailable,
  bad_file,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace relconj
