#pragma once

#include <string>
#include <vector>

namespace gatsbi::cli {

// Entry point behind main(). Exit codes: 0 success, 1 mission failure,
// 2 usage or configuration errors.
int dispatch(const std::vector<std::string>& args);

}  // namespace gatsbi::cli
