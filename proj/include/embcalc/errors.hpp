#pragma once

#include <stdexcept>
#include <string>

namespace embcalc {

/* Error taxonomy used across the library.
 *
 *   invalid_argument       -- malformed input (wrong arity, empty list, bad value)
 *   precondition_violation -- structurally fine input outside a stated precondition
 *                             (e.g. a handle index >= rho)
 *   unsupported_range      -- input outside the range the theory covers
 *                             (e.g. ambient dimension n < 4 for the knot commands)
 *
 * The CLI maps the first two to exit code 2 and the last to exit code 3.
 */

struct invalid_argument : std::invalid_argument {
  explicit invalid_argument(const std::string& what) : std::invalid_argument(what) {}
};

struct precondition_violation : invalid_argument {
  explicit precondition_violation(const std::string& what) : invalid_argument(what) {}
};

struct unsupported_range : std::domain_error {
  explicit unsupported_range(const std::string& what) : std::domain_error(what) {}
};

} // namespace embcalc
