#ifndef FWERKIT_ERRORS_HPP
#define FWERKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fwerkit {

// Bad user input: malformed files, unknown ids, out-of-range values.
// The CLI maps these to exit code 1; anything else is an internal fault (2).
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A testing plan that fails validation (weight sum, duplicate ids, ...).
class plan_error : public input_error {
 public:
  explicit plan_error(const std::string& what) : input_error(what) {}
};

}  // namespace fwerkit

#endif
