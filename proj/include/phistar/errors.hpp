#pragma once

#include <stdexcept>
#include <string>

#include "phistar/natural.hpp"

namespace phistar {

/// Argument outside an operation's domain (n <= 1 for P(n), p | a for ord_p(a), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed decimal or factored-integer text.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A composite cofactor survived the factoring budget.
class EffortExceeded : public std::runtime_error {
 public:
  explicit EffortExceeded(Natural cofactor)
      : std::runtime_error("factoring effort exceeded on cofactor " + cofactor.get_str()),
        cofactor_(std::move(cofactor)) {}

  const Natural& cofactor() const noexcept { return cofactor_; }

 private:
  Natural cofactor_;
};

}  // namespace phistar
