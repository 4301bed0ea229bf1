#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace heun {

// Runs the cross-module invariant suite at reduced corpus size, printing one
// pass/fail line per invariant.  `filter` keeps only checks whose name
// contains the substring.  Returns the number of failed checks.
int run_selftest(std::uint64_t seed, const std::string& filter, std::ostream& os);

}  // namespace heun
