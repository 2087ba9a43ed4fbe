#include "pmom/identities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pmom/quadrature.hpp"

namespace pmom {

namespace {

IdentityCheck check(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, value <= tolerance};
}

constexpr double kOrders[] = {0.5, 1.0, 2.1, 3.2, 4.3, 5.4, 6.5};

}  // namespace

double gaussian_abs_moment_quadrature(double lambda) {
  // t = s^2 keeps the integrand smooth at the origin.
  const auto f = [lambda](double s) {
    const double t = s * s;
    return 2.0 * s * std::pow(t, lambda) * std::exp(-0.5 * t * t);
  };
  const double upper = std::sqrt(std::max(12.0, 4.0 * std::sqrt(lambda + 1.0) + 8.0));
  const double half = integrate(f, 0.0, upper, {.rel_tol = 1e-13}).value;
  return 2.0 * half / std::sqrt(2.0 * std::numbers::pi);
}

double sin_power_truncation_error(int power, int N) {
  const auto c = sin_power_coefficients(power, N);
  double worst = 0.0;
  constexpr int kGrid = 10000;
  for (int i = 0; i <= kGrid; ++i) {
    const double u = static_cast<double>(i) / kGrid;
    worst = std::max(worst, std::fabs(eval_even_series(c, u) - std::pow(std::sin(u), power)));
  }
  return worst;
}

std::vector<IdentityCheck> identity_suite(const VerifierConfig& config) {
  validate(config);
  std::vector<IdentityCheck> out;
  constexpr double pi = std::numbers::pi;

  double rec = 0.0;
  for (int i = 1; i <= 500; ++i) {
    const double x = 0.1 * i;
    rec = std::max(rec, std::fabs(gamma(x + 1.0) - x * gamma(x)) / gamma(x + 1.0));
  }
  out.push_back(check("gamma recurrence, x = 0.1..50", rec, 1e-12));

  double dup = 0.0;
  for (int i = 1; i <= 200; ++i) dup = std::max(dup, duplication_residual(0.25 * i));
  out.push_back(check("duplication residual, z = 0.25..50", dup, 1e-10));

  double even = 0.0;
  for (int m = 1; m <= 10; ++m) {
    const double dfact = gaussian_moment_even(2 * m);
    even = std::max(even, std::fabs(gaussian_abs_moment(2.0 * m) - dfact) / dfact);
  }
  out.push_back(check("gaussian_abs_moment(2m) = (2m-1)!!, m <= 10", even, 1e-10));

  double quad = 0.0;
  for (const double l : kOrders) {
    const double g = gaussian_abs_moment(l);
    quad = std::max(quad, std::fabs(g - gaussian_abs_moment_quadrature(l)) / g);
  }
  out.push_back(check("gaussian_abs_moment vs quadrature", quad, 1e-8));

  double ghosh = 0.0, ghosh_moment = 0.0;
  for (const double l : kOrders) {
    const auto g = ghosh_pipeline_check(l);
    ghosh = std::max(ghosh, g.residual);
    ghosh_moment = std::max(ghosh_moment, g.moment_residual);
  }
  out.push_back(check("Gaussian reduction residual", ghosh, 1e-10));
  out.push_back(check("Gaussian reduction moment residual", ghosh_moment, 1e-10));

  out.push_back(check("G_1 = pi/2", std::fabs(G_lambda(1.0, config).value - pi / 2), 1e-6));
  out.push_back(check("D_2 = pi/3", std::fabs(D_theta(2.0, config).value - pi / 3), 1e-6));

  VerifierConfig doubled = config;
  doubled.osc_cutoff_periods *= 2;
  const double stable = 10.0 * config.quad_rel_tol;
  const double g = G_lambda(0.5, config).value;
  out.push_back(check("G_0.5 cutoff doubling", std::fabs(G_lambda(0.5, doubled).value - g) / g, stable));
  const double d = D_theta(1.0, config).value;
  out.push_back(check("D_1 cutoff doubling", std::fabs(D_theta(1.0, doubled).value - d) / d, stable));

  const auto c4 = sin_power_coefficients(4, 2);
  out.push_back(check("sin^4 u^4 coefficient = +1", std::fabs(c4[2] - 1.0), 1e-15));
  out.push_back(check("sin^2 truncation, N = " + std::to_string(config.taylor_N),
                      sin_power_truncation_error(2, config.taylor_N), 1e-10));
  out.push_back(check("sin^4 truncation, N = " + std::to_string(config.taylor_N),
                      sin_power_truncation_error(4, config.taylor_N), 1e-10));
  return out;
}

}  // namespace pmom
