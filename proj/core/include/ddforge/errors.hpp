#ifndef DDFORGE_ERRORS_HPP
#define DDFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ddforge {

/// Input or precondition violation; the CLI maps this to exit code 2.
struct validation_error : std::invalid_argument {
  explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

/// File or stream failure; CLI exit code 3.
struct io_error : std::runtime_error {
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (non-finite values in a solve); CLI exit code 4.
struct convergence_error : std::runtime_error {
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ddforge

#endif
