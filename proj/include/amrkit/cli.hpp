#pragma once

#include <iosfwd>

namespace amrkit {

/// Default scorer command when neither --scorer-cmd nor --scores is given.
inline constexpr const char* kScorerEnv = "AMRKIT_SCORER_CMD";

/// Runs one `amrkit` command line. Returns 0 on success, 1 when
/// `validate --strict` finds a corrupted graph, 2 on usage, parse, I/O or
/// scorer errors.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace amrkit
