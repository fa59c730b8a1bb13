#pragma once

#include <iosfwd>

namespace quantcap {

/// Entry point behind the `quantcap` binary; streams are injectable so the
/// command layer can be exercised in-process.
/// Exit codes: 0 ok, 1 usage error, 2 solver non-convergence,
/// 3 table regression failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace quantcap
