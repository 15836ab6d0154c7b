#pragma once

#include <stdexcept>
#include <string>

namespace mr1l {

// Bad user input or violated precondition. CLI maps this to exit code 2.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A state that correct inputs should never reach (broken internal guarantee).
// CLI maps this to exit code 3.
class internal_error : public std::runtime_error {
 public:
  explicit internal_error(const std::string& msg) : std::runtime_error(msg) {}
};

// The single rank-1 lattice handed to the planner does not separate the
// frequency set, so no multi-lattice split can reproduce its coefficients.
class not_reconstructing_error : public validation_error {
 public:
  explicit not_reconstructing_error(const std::string& msg) : validation_error(msg) {}
};

// A round scanned its whole candidate prime window without finding an
// acceptable prime. The size of the window is chosen so that this cannot
// happen; reaching it means an implementation bug.
class candidate_exhausted_error : public internal_error {
 public:
  explicit candidate_exhausted_error(const std::string& msg) : internal_error(msg) {}
};

}  // namespace mr1l
