#pragma once

#include <stdexcept>
#include <string>

namespace snev {

// Thrown when an operation is requested outside its shape regime, e.g. a
// negative-lambda-only quantity at lambda >= 0, or n below the first index
// where the negative-regime experiment is defined.
class RegimeError : public std::domain_error {
public:
  explicit RegimeError(const std::string& msg) : std::domain_error(msg) {}
};

}  // namespace snev
