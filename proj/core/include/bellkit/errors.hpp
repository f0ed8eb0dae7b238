#pragma once

#include <stdexcept>
#include <string>

namespace bellkit {

// Out-of-range or non-finite physical parameters.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or incomplete caller input (grids, count records, run configs).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace bellkit
