#pragma once

#include <string>
#include <vector>

#include "pmom/special_functions.hpp"

namespace pmom {

struct IdentityCheck {
  std::string name;
  double value = 0.0;      // worst residual or deviation observed
  double tolerance = 0.0;
  bool passed = false;
};

// Every numeric identity behind the Gaussian moment constants, evaluated
// with the given verifier settings. Pure; runs in well under a second.
std::vector<IdentityCheck> identity_suite(const VerifierConfig& config = {});

// Direct quadrature of int |t|^lambda exp(-t^2/2) / sqrt(2 pi) dt.
double gaussian_abs_moment_quadrature(double lambda);

// max |truncated series - sin^power(u)| on a dense grid over [0, 1].
double sin_power_truncation_error(int power, int N);

}  // namespace pmom
