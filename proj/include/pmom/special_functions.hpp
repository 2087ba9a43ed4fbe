#pragma once

#include <vector>

namespace pmom {

struct VerifierConfig {
  double quad_rel_tol = 1e-8;
  int osc_cutoff_periods = 100;  // quadrature runs to U = cutoff * pi
  int taylor_N = 10;
};

void validate(const VerifierConfig& config);

/// Gamma function on 0 < x <= 200 (Lanczos, g = 7, nine terms). Overflows to
/// +inf above x ~ 171.62 like any binary64 gamma.
double gamma(double x);
/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// E|Z|^lambda for standard normal Z: Gamma(l+1) / (Gamma(l/2+1) 2^(l/2)),
/// 0 < lambda <= 60.
double gaussian_abs_moment(double lambda);

/// (k-1)!! for even k, 0 for odd k.
double gaussian_moment_even(int k);

/// Relative residual of sqrt(pi) Gamma(2z) = 2^(2z-1) Gamma(z) Gamma(z+1/2).
double duplication_residual(double z);

struct OscillatoryIntegral {
  double value = 0.0;
  double quadrature_error = 0.0;  // summed per-interval estimates on [0, U]
  double tail = 0.0;              // analytic contribution of [U, inf)
  double tail_remainder = 0.0;    // bound on the truncated tail expansion
  double tail_bound = 0.0;        // crude |tail| bound: mean part alone
  double cutoff = 0.0;            // U
};

/// G_lambda = int_0^inf sin^2(u) / u^(1+lambda) du, lambda in [0.1, 2).
OscillatoryIntegral G_lambda(double lambda, const VerifierConfig& config = {});

/// D_theta = int_0^inf sin^4(u) / u^(2+theta) du, theta in (0, 2].
OscillatoryIntegral D_theta(double theta, const VerifierConfig& config = {});

/// Maclaurin coefficients of sin^power(u), power in {2, 4}: element j
/// multiplies u^(2j), for j <= N. The sin^4 coefficients are b_j / 8 with
/// b_j = (-1)^j 4^(j+1) (4^(j-1) - 1) / (2j)!, which makes the u^4 term +1.
std::vector<double> sin_power_coefficients(int power, int N);

double eval_even_series(const std::vector<double>& coefficients, double u);

struct GhoshCheck {
  double lhs = 0.0;  // 2^l Gamma((l+1)/2) / sqrt(pi)
  double rhs = 0.0;  // Gamma(l+1) / Gamma(l/2+1)
  double residual = 0.0;
  double moment_residual = 0.0;  // gaussian_abs_moment vs rhs / 2^(l/2)
};

/// Checks the last steps of the Gaussian moment reduction for order lambda,
/// 0 < lambda <= 60.
GhoshCheck ghosh_pipeline_check(double lambda);

}  // namespace pmom
