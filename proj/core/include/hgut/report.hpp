#pragma once

#include <cstdint>
#include <string>

namespace hgut::verify {

/// Outcome of one numerical verification:
///  - identity checks record |LHS - RHS| in `deviation` and hold when it is
///    within `tolerance`;
///  - inequality checks hold when lhs <= rhs * (1 + tolerance) + tolerance;
///  - enumerated checks count configurations and report `vacuous` when the
///    premise never fired.
struct VerificationReport {
  std::string name;
  std::string instance;  // shape / seed / parameter descriptor
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;      // lhs / rhs, 0 when both vanish
  double deviation = 0.0;  // |LHS - RHS| for identities
  double tolerance = 0.0;
  bool is_identity = false;
  bool vacuous = false;
  bool holds = false;
  std::int64_t cases_checked = 0;
  std::int64_t premise_cases = 0;

  std::string to_json() const;

  static double safe_ratio(double lhs, double rhs) {
    if (rhs != 0.0) return lhs / rhs;
    return (lhs == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
  }
};

}  // namespace hgut::verify
