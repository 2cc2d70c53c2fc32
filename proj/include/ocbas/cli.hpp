#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ocbas {

/// Entry point shared by the ocbas binary and the tests. args excludes the
/// program name and is in natural order. Results go to `out` when no --out
/// path is given; diagnostics go to `err`. Returns 0 on success, 1 on
/// runtime failure, 2 on usage errors.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ocbas
