#pragma once

#include <functional>

namespace pmom {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;   // estimated absolute error
  int evaluations = 0;
  bool converged = false;
};

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 2000;
};

// Globally adaptive Gauss-Kronrod (7/15) on [a, b]: the interval with the
// largest error estimate is bisected until the total estimate meets
// max(abs_tol, rel_tol * |value|).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& options = {});

}  // namespace pmom
