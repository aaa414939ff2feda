#pragma once

#include <vector>

namespace gsched {

// min c'z  subject to  A z <= b,  lo <= z <= hi.
// Bounds may be -inf / +inf (use std::numeric_limits<double>::infinity()).
struct LinearProgram {
  std::vector<double> c;
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<double> lo;
  std::vector<double> hi;

  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> z;
  double value = 0.0;
};

// Dense two-phase simplex with Bland's rule. Returns an optimal basic
// solution for feasible bounded problems; constraint residuals within 1e-9
// at these problem sizes.
LpSolution lp_solve(const LinearProgram& lp);

namespace detail {

// min c'x  subject to  A x = b,  x >= 0 (standard form). The returned x is a
// basic solution: at most #rows components are nonzero.
LpSolution simplex_standard(const std::vector<std::vector<double>>& A,
                            const std::vector<double>& b,
                            const std::vector<double>& c);

}  // namespace detail

}  // namespace gsched
