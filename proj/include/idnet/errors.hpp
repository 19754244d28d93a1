#pragma once

#include <stdexcept>
#include <string>

namespace idnet {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// No feasible route: disconnected graph, no node-disjoint pair, ...
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// An enumeration cap or solver budget was exceeded.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

}  // namespace idnet
