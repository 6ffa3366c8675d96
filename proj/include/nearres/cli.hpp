#pragma once

#include <string>
#include <vector>

namespace nearres {

// Runs one CLI invocation.  Exit codes: 0 success, 1 validation/usage error,
// 2 numeric failure (NaN or blow-up).
int dispatch(const std::vector<std::string>& args);

}  // namespace nearres
