#pragma once

#include <iosfwd>

namespace biotfs {

/// Runs the full acceptance suite, printing one PASS/FAIL line per
/// criterion. Returns true iff every criterion passed.
bool run_acceptance(std::ostream& os);

}  // namespace biotfs
