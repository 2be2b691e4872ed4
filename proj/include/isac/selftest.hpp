#pragma once

#include <ostream>

namespace isac {

/// Quick internal consistency checks on a small random instance. Prints one
/// line per check and returns true when all pass.
bool run_selftest(std::ostream& log);

}  // namespace isac
