#include "pmom/special_functions.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "pmom/error.hpp"
#include "pmom/quadrature.hpp"

namespace pmom {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos coefficients, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

struct LanczosParts {
  double t;    // x - 1 + g + 1/2
  double sum;  // A_g(x)
  double xm;   // x - 1
};

LanczosParts lanczos(double x) {
  const double xm = x - 1.0;
  double sum = kLanczos[0];
  for (int i = 1; i < 9; ++i) sum += kLanczos[i] / (xm + i);
  return {xm + kLanczosG + 0.5, sum, xm};
}

double sinc(double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; }

// Re of int_U^inf exp(i w u) u^-s du by its asymptotic expansion
//   -exp(i w U) sum_k (s)_k (i w)^-(k+1) U^-(s+k).
// remainder receives the size of the first omitted term.
double oscillatory_tail(double omega, double s, double U, double& remainder) {
  const std::complex<double> iw(0.0, omega);
  std::complex<double> term = std::pow(U, -s) / iw;
  std::complex<double> sum = term;
  double prev = std::abs(term);
  remainder = prev;
  for (int k = 1; k < 80; ++k) {
    const std::complex<double> next = term * ((s + k - 1) / (iw * U));
    const double mag = std::abs(next);
    remainder = mag;
    if (mag >= prev) break;  // asymptotic series started to diverge
    sum += next;
    term = next;
    prev = mag;
    if (mag < 1e-18 * std::abs(sum)) break;
  }
  return (-std::polar(1.0, omega * U) * sum).real();
}

struct Piecewise {
  double value = 0.0;
  double error = 0.0;
};

// [0, pi/2] after u = t^k removes the u^alpha endpoint behaviour, then
// half-period panels [j pi/2, (j+1) pi/2] up to U.
template <class Near, class Far>
Piecewise half_period_quadrature(Near near, double t_max, Far far, int panels, double rel_tol) {
  Piecewise p;
  const QuadOptions opt{.rel_tol = rel_tol, .abs_tol = 0.0, .max_intervals = 4000};
  const auto head = integrate(near, 0.0, t_max, opt);
  p.value += head.value;
  p.error += head.error;
  for (int j = 1; j < panels; ++j) {
    const auto r = integrate(far, j * kPi / 2, (j + 1) * kPi / 2, opt);
    p.value += r.value;
    p.error += r.error;
  }
  return p;
}

}  // namespace

void validate(const VerifierConfig& config) {
  if (!(config.quad_rel_tol > 0.0 && config.quad_rel_tol <= 1e-2))
    fail(ErrorKind::InvalidArgument, "quad_rel_tol must lie in (0, 1e-2]");
  if (config.taylor_N < 2) fail(ErrorKind::InvalidArgument, "taylor_N must be at least 2");
  if (config.osc_cutoff_periods < 1)
    fail(ErrorKind::InvalidArgument, "osc_cutoff_periods must be positive");
}

double gamma(double x) {
  if (!(x > 0.0)) fail(ErrorKind::Domain, "gamma requires x > 0");
  if (x > 200.0) fail(ErrorKind::Domain, "gamma is only provided for x <= 200");
  if (x < 0.5) return gamma(x + 1.0) / x;
  const auto [t, sum, xm] = lanczos(x);
  // t^(x-1/2) split in two halves so the power cannot overflow before exp(-t).
  const double half = std::pow(t, 0.5 * (xm + 0.5));
  return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * sum;
}

double log_gamma(double x) {
  if (!(x > 0.0)) fail(ErrorKind::Domain, "log_gamma requires x > 0");
  if (x < 0.5) return log_gamma(x + 1.0) - std::log(x);
  const auto [t, sum, xm] = lanczos(x);
  return 0.5 * std::log(2.0 * kPi) + (xm + 0.5) * std::log(t) - t + std::log(sum);
}

double gaussian_abs_moment(double lambda) {
  if (!(lambda > 0.0 && lambda <= 60.0))
    fail(ErrorKind::Domain, "gaussian_abs_moment requires 0 < lambda <= 60");
  return gamma(lambda + 1.0) / (gamma(lambda / 2.0 + 1.0) * std::exp2(lambda / 2.0));
}

double gaussian_moment_even(int k) {
  if (k < 0) fail(ErrorKind::Domain, "moment index must be non-negative");
  if (k % 2 == 1) return 0.0;
  double m = 1.0;
  for (int i = k - 1; i > 1; i -= 2) m *= i;
  return m;
}

double duplication_residual(double z) {
  if (!(z > 0.0 && z <= 100.0)) fail(ErrorKind::Domain, "duplication_residual requires 0 < z <= 100");
  if (2.0 * z <= 170.0) {
    const double lhs = std::sqrt(kPi) * gamma(2.0 * z);
    const double rhs = std::exp2(2.0 * z - 1.0) * gamma(z) * gamma(z + 0.5);
    return std::fabs(lhs - rhs) / lhs;
  }
  const double d = (2.0 * z - 1.0) * std::log(2.0) + log_gamma(z) + log_gamma(z + 0.5) -
                   0.5 * std::log(kPi) - log_gamma(2.0 * z);
  return std::fabs(std::expm1(d));
}

OscillatoryIntegral G_lambda(double lambda, const VerifierConfig& config) {
  validate(config);
  if (!(lambda >= 0.1 && lambda < 2.0)) fail(ErrorKind::Domain, "G_lambda requires lambda in [0.1, 2)");
  const double s = 1.0 + lambda;
  const double k = 1.0 / (2.0 - lambda);
  const int panels = 2 * config.osc_cutoff_periods;
  const double U = config.osc_cutoff_periods * kPi;

  const auto body = half_period_quadrature(
      [k](double t) { const double q = sinc(std::pow(t, k)); return k * q * q; },
      std::pow(kPi / 2, 2.0 - lambda),
      [s](double u) { const double q = std::sin(u); return q * q / std::pow(u, s); },
      panels, config.quad_rel_tol / 10.0);

  // sin^2 = (1 - cos 2u) / 2
  double rem = 0.0;
  OscillatoryIntegral r;
  r.cutoff = U;
  r.tail = std::pow(U, -lambda) / (2.0 * lambda) - 0.5 * oscillatory_tail(2.0, s, U, rem);
  r.tail_remainder = 0.5 * rem;
  r.tail_bound = std::pow(U, -lambda) / lambda;
  r.quadrature_error = body.error;
  r.value = body.value + r.tail;
  return r;
}

OscillatoryIntegral D_theta(double theta, const VerifierConfig& config) {
  validate(config);
  if (!(theta > 0.0 && theta <= 2.0)) fail(ErrorKind::Domain, "D_theta requires theta in (0, 2]");
  const double s = 2.0 + theta;
  const double k = 1.0 / (3.0 - theta);
  const int panels = 2 * config.osc_cutoff_periods;
  const double U = config.osc_cutoff_periods * kPi;

  const auto body = half_period_quadrature(
      [k](double t) { const double q = sinc(std::pow(t, k)); return k * q * q * q * q; },
      std::pow(kPi / 2, 3.0 - theta),
      [s](double u) { const double q = std::sin(u); return q * q * q * q / std::pow(u, s); },
      panels, config.quad_rel_tol / 10.0);

  // sin^4 = 3/8 - cos(2u)/2 + cos(4u)/8
  double rem2 = 0.0, rem4 = 0.0;
  OscillatoryIntegral r;
  r.cutoff = U;
  r.tail = 0.375 * std::pow(U, 1.0 - s) / (s - 1.0) - 0.5 * oscillatory_tail(2.0, s, U, rem2) +
           0.125 * oscillatory_tail(4.0, s, U, rem4);
  r.tail_remainder = 0.5 * rem2 + 0.125 * rem4;
  r.tail_bound = std::pow(U, -1.0 - theta) / (1.0 + theta);
  r.quadrature_error = body.error;
  r.value = body.value + r.tail;
  return r;
}

std::vector<double> sin_power_coefficients(int power, int N) {
  if (power != 2 && power != 4)
    fail(ErrorKind::InvalidArgument, "sin power must be 2 or 4, got " + std::to_string(power));
  if (N < power / 2) fail(ErrorKind::Domain, "N must be at least power/2");
  if (N > 500) fail(ErrorKind::Domain, "N above 500 is not supported");
  std::vector<double> c(static_cast<std::size_t>(N) + 1, 0.0);
  double a = 1.0;  // 4^j / (2j)!
  for (int j = 1; j <= N; ++j) {
    a *= 4.0 / ((2.0 * j) * (2.0 * j - 1.0));
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;  // (-1)^j
    if (power == 2) {
      c[static_cast<std::size_t>(j)] = -0.5 * sign * a;
    } else if (j >= 2) {
      const double b = sign * 4.0 * a * (std::exp2(2.0 * (j - 1)) - 1.0);
      c[static_cast<std::size_t>(j)] = b / 8.0;
    }
  }
  return c;
}

double eval_even_series(const std::vector<double>& coefficients, double u) {
  const double u2 = u * u;
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * u2 + *it;
  return acc;
}

GhoshCheck ghosh_pipeline_check(double lambda) {
  if (!(lambda > 0.0 && lambda <= 60.0))
    fail(ErrorKind::Domain, "ghosh_pipeline_check requires 0 < lambda <= 60");
  GhoshCheck g;
  g.lhs = std::exp2(lambda) * gamma((lambda + 1.0) / 2.0) / std::sqrt(kPi);
  g.rhs = gamma(lambda + 1.0) / gamma(lambda / 2.0 + 1.0);
  g.residual = std::fabs(g.lhs - g.rhs) / g.rhs;
  const double via_lhs = g.lhs / std::exp2(lambda / 2.0);
  g.moment_residual = std::fabs(gaussian_abs_moment(lambda) - via_lhs) / via_lhs;
  return g;
}

}  // namespace pmom
