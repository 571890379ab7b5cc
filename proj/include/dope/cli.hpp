#pragma once

#include <string>
#include <vector>

namespace dope {

// Full command-line surface. Exit codes: 0 success, 2 validation failure,
// 3 numerical-accuracy failure, 64 usage error.
int dispatch(const std::vector<std::string>& argv);

}  // namespace dope
