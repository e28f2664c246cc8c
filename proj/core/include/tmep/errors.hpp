#pragma once

#include <stdexcept>
#include <string>

namespace tmep {

/// Invalid lattice model (empty hopping list, t_n == 0, non-finite entries,
/// malformed serialization).
class ModelError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A precondition of a numerical routine was violated by the caller.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative solver ran out of its iteration budget.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, int iteration_budget)
      : std::runtime_error(what + " (iteration budget " + std::to_string(iteration_budget) + ")"),
        budget_(iteration_budget) {}

  int iteration_budget() const noexcept { return budget_; }

private:
  int budget_;
};

} // namespace tmep
