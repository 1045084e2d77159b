#pragma once

#include <stdexcept>
#include <string>

namespace pointproc {

// Raised for malformed inputs: bad files, inconsistent dimensions,
// out-of-range configuration.  Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a computation degenerates (zero intensity at an observed
// event, exhausted thinning proposals, non-finite loss).  Maps to CLI
// exit code 2.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pointproc
