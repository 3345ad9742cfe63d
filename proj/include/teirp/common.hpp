#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace teirp {

using Quantity = std::int64_t;
using Cost = double;

// Centralized numeric tolerances.
namespace tol {
inline constexpr double kFeasibility = 1e-7;
inline constexpr double kOptimality = 1e-6;
inline constexpr double kIntegrality = 1e-6;
inline constexpr double kCost = 1e-6;
inline constexpr double kReducedCost = 1e-6;
}  // namespace tol

/// Malformed or out-of-range user input (files, ids, periods).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace teirp
