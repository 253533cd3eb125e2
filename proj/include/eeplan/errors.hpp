#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace eeplan {

// Invalid argument or out-of-domain input.
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

// A design point or problem admits no feasible solution.
struct infeasible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Gram matrix or combiner system could not be solved reliably.
struct numerical_rank_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative method hit its cap. Carries the iterate trace as text.
struct non_convergence_error : std::runtime_error {
  non_convergence_error(const std::string& what, std::vector<std::string> trace)
      : std::runtime_error(what), trace(std::move(trace)) {}
  std::vector<std::string> trace;
};

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw domain_error(msg);
}

}  // namespace eeplan
