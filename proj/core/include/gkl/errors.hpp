#pragma once

#include <stdexcept>
#include <string>

namespace gkl {

// Rejected input (precondition violation) is reported as std::invalid_argument.

// Thrown when the Newton update would divide by a power value at or below
// the eligibility floor. Indicates an ill-conditioned selection.
class numerical_breakdown : public std::runtime_error {
 public:
  explicit numerical_breakdown(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a dense kernel matrix factorization fails.
class singular_matrix : public std::runtime_error {
 public:
  explicit singular_matrix(const std::string& what) : std::runtime_error(what) {}
};

// I/O failure distinct from bad input so the CLI can map exit codes.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gkl
