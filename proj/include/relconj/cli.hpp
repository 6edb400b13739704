#pragma once

#include <iosfwd>
#include <string_view>

#include "relconj/errors.hpp"

namespace relconj::cli {

inline constexpr std::string_view kVersion = "relconj 0.1.0";

// Exit code protocol: 0 conjugate / verified, 1 not conjugate / rejected,
// 2 inconclusive, 3 file or input errors, 4 missing or degenerate constants,
// 5 not a conjugator, 6 oracle failure, 7 internal errors.
int exit_code_for(Errc code);

int dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace relconj::cli
