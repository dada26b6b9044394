#pragma once

#include <stdexcept>

namespace emato {

// Configuration problems: bad CLI flags, malformed config or data files,
// invalid parameter combinations. The CLI maps these to exit code 2; all
// other exceptions map to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace emato
