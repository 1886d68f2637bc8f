#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace altcanvas::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitAssertion = 3;
inline constexpr int kExitBackend = 4;

/// Entry point shared by the binary and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace altcanvas::cli
