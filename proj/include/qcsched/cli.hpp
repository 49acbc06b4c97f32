#pragma once

namespace qcsched {

// Entry point behind the qcsched binary. Exit codes: 0 success, 1 usage
// error, 2 data/validation error, 3 infeasible optimization.
int cli_main(int argc, const char* const* argv);

}  // namespace qcsched
