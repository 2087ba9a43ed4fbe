#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pmom/error.hpp"
#include "pmom/identities.hpp"
#include "pmom/special_functions.hpp"

using namespace pmom;
using std::numbers::pi;

namespace {

ErrorKind kind_of(const auto& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected pmom::Error");
  return ErrorKind::Invariant;
}

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("gamma values") {
  CHECK(oracle::rel(pmom::gamma(1.0), 1.0) <= 1e-12);
  CHECK(oracle::rel(pmom::gamma(0.5), std::sqrt(pi)) <= 1e-12);
  CHECK(oracle::rel(pmom::gamma(2.5), 1.5 * 0.5 * std::sqrt(pi)) <= 1e-12);
  CHECK(oracle::rel(pmom::gamma(11.0), 3628800.0) <= 1e-12);
  CHECK(oracle::rel(pmom::gamma(0.1), 9.5135076986687318) <= 1e-12);
  CHECK(std::isinf(pmom::gamma(180.0)));
  CHECK(oracle::rel(log_gamma(180.0), std::lgamma(180.0)) <= 1e-12);
  CHECK(kind_of([] { pmom::gamma(0.0); }) == ErrorKind::Domain);
  CHECK(kind_of([] { pmom::gamma(-1.5); }) == ErrorKind::Domain);
  CHECK(kind_of([] { pmom::gamma(200.5); }) == ErrorKind::Domain);
}

TEST_CASE("gamma recurrence on 0.1..50") {
  for (int i = 1; i <= 500; ++i) {
    const double x = 0.1 * i;
    CHECK(std::fabs(pmom::gamma(x + 1) - x * pmom::gamma(x)) / pmom::gamma(x + 1) <= 1e-12);
  }
}

TEST_CASE("duplication residual") {
  CHECK(duplication_residual(1.0) <= 1e-12);
  CHECK(duplication_residual(0.5) <= 1e-12);
  CHECK(duplication_residual(25.0) <= 1e-10);
  for (int i = 1; i <= 200; ++i) CHECK(duplication_residual(0.25 * i) <= 1e-10);
  CHECK(duplication_residual(100.0) <= 1e-10);
  CHECK(kind_of([] { duplication_residual(0.0); }) == ErrorKind::Domain);
  CHECK(kind_of([] { duplication_residual(100.5); }) == ErrorKind::Domain);
}

TEST_CASE("gaussian absolute moments") {
  CHECK(gaussian_abs_moment(2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gaussian_abs_moment(4.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(oracle::rel(gaussian_abs_moment(1.0), 0.7978845608028654) <= 1e-12);
  double dfact = 1.0;
  for (int m = 1; m <= 10; ++m) {
    dfact *= 2 * m - 1;
    CHECK(oracle::rel(gaussian_abs_moment(2.0 * m), dfact) <= 1e-10);
    CHECK(gaussian_moment_even(2 * m) == dfact);
    CHECK(gaussian_moment_even(2 * m - 1) == 0.0);
  }
  CHECK(kind_of([] { gaussian_abs_moment(0.0); }) == ErrorKind::Domain);
  CHECK(kind_of([] { gaussian_abs_moment(60.5); }) == ErrorKind::Domain);
}

TEST_CASE("gaussian moments agree with Simpson quadrature") {
  for (const double l : {0.5, 1.0, 2.1, 3.2, 4.3, 5.4, 6.5}) {
    CAPTURE(l);
    // t = s^2, integrand 2 s^(2l+1) exp(-s^4/2) on [0, 4], both halves of the line.
    const auto f = [l](double s) { return 2.0 * std::pow(s, 2 * l + 1) * std::exp(-0.5 * std::pow(s, 4)); };
    const double q = 2.0 * simpson(f, 0.0, 4.0, 40000) / std::sqrt(2 * pi);
    CHECK(oracle::rel(gaussian_abs_moment(l), q) <= 1e-8);
    CHECK(oracle::rel(gaussian_abs_moment_quadrature(l), q) <= 1e-8);
  }
}

TEST_CASE("G_lambda") {
  const auto g1 = G_lambda(1.0);
  CHECK(std::fabs(g1.value - pi / 2) <= 1e-6);
  CHECK(g1.cutoff == doctest::Approx(100 * pi));
  // sin^2(2u)/u^2 integrated directly: Simpson to U, then the mean of sin^2 on the tail.
  const double U = 200 * pi;
  const double direct =
      simpson([](double u) { return u == 0 ? 4.0 : std::pow(std::sin(2 * u) / u, 2); }, 0.0, U, 400000) + 0.5 / U;
  CHECK(std::fabs(direct - 2.0 * g1.value) <= 1e-5);
  CHECK(std::fabs(2.0 * g1.value - pi) <= 1e-5);
  CHECK(std::fabs(G_lambda(0.5).value - std::sqrt(pi)) <= 1e-8);

  VerifierConfig doubled;
  doubled.osc_cutoff_periods = 200;
  for (const double l : {0.1, 0.5, 1.0, 1.5, 1.9}) {
    CAPTURE(l);
    const double a = G_lambda(l).value, b = G_lambda(l, doubled).value;
    CHECK(a > 0.0);
    CHECK(std::fabs(a - b) / a <= 1e-7);
  }
  CHECK(kind_of([] { G_lambda(0.05); }) == ErrorKind::Domain);
  CHECK(kind_of([] { G_lambda(2.0); }) == ErrorKind::Domain);
}

TEST_CASE("D_theta") {
  CHECK(std::fabs(D_theta(2.0).value - pi / 3) <= 1e-6);
  CHECK(std::fabs(D_theta(1.0).value - std::log(2.0)) <= 1e-9);
  const double U = 200 * pi;
  const double direct =
      simpson([](double u) { return u == 0 ? 0.0 : std::pow(std::sin(2 * u), 4) / (u * u * u); }, 0.0, U, 400000) +
      3.0 / (16.0 * U * U);
  CHECK(std::fabs(direct / D_theta(1.0).value - 4.0) <= 1e-4);
  VerifierConfig doubled;
  doubled.osc_cutoff_periods = 200;
  for (const double t : {0.05, 0.5, 1.0, 2.0}) {
    const double a = D_theta(t).value, b = D_theta(t, doubled).value;
    CHECK(std::fabs(a - b) / a <= 1e-7);
  }
  CHECK(kind_of([] { D_theta(0.0); }) == ErrorKind::Domain);
  CHECK(kind_of([] { D_theta(2.5); }) == ErrorKind::Domain);
}

TEST_CASE("sin power coefficients") {
  const auto c2 = sin_power_coefficients(2, 10);
  CHECK(c2[0] == 0.0);
  CHECK(c2[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c2[2] == doctest::Approx(-1.0 / 3).epsilon(1e-15));

  // sin^4 u = (3 - 4 cos 2u + cos 4u) / 8
  const auto c4 = sin_power_coefficients(4, 10);
  REQUIRE(c4.size() == 11);
  double fact = 1.0;
  for (int j = 1; j <= 10; ++j) {
    fact *= (2 * j - 1) * (2 * j);
    const double sign = j % 2 ? -1.0 : 1.0;
    const double want = sign * (-4.0 * std::pow(2.0, 2 * j) + std::pow(4.0, 2 * j)) / (8.0 * fact);
    CAPTURE(j);
    CHECK(std::fabs(c4[j] - want) <= 1e-15 * std::max(1.0, std::fabs(want)));
  }
  CHECK(c4[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c4[3] == doctest::Approx(-2.0 / 3).epsilon(1e-15));

  // The literal (-4)^(j+1) (4^(j-1) - 1) / (2j)! without the (-1)^j factor gives -u^4.
  const double literal_b2 = std::pow(-4.0, 3) * (4.0 - 1.0) / 24.0;
  CHECK(literal_b2 / 8.0 == doctest::Approx(-1.0));

  CHECK(kind_of([] { sin_power_coefficients(3, 10); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { sin_power_coefficients(4, 1); }) == ErrorKind::Domain);
}

TEST_CASE("sin power truncation error tracks the first omitted term") {
  CHECK(sin_power_truncation_error(2, 10) <= 1e-14);
  // Dominated by the first omitted term near u = 1, about 1.9e-9.
  const double e10 = sin_power_truncation_error(4, 10);
  CHECK(e10 == doctest::Approx(1.9e-9).epsilon(0.02));
  CHECK(sin_power_truncation_error(4, 11) <= 1e-10);
  CHECK(sin_power_truncation_error(4, 12) <= 2e-12);
}

TEST_CASE("Gaussian reduction check") {
  const auto g1 = ghosh_pipeline_check(1.0);
  CHECK(g1.lhs == doctest::Approx(2.0 / std::sqrt(pi)).epsilon(1e-12));
  CHECK(g1.residual <= 1e-12);
  const auto g2 = ghosh_pipeline_check(2.0);
  CHECK(g2.rhs == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(g2.residual <= 1e-12);
  CHECK(ghosh_pipeline_check(7.3).residual <= 1e-10);
  for (const double l : {0.5, 1.0, 2.1, 3.2, 4.3, 5.4, 6.5, 40.0, 60.0}) {
    const auto g = ghosh_pipeline_check(l);
    CHECK(g.residual <= 1e-10);
    CHECK(g.moment_residual <= 1e-10);
  }
  CHECK(kind_of([] { ghosh_pipeline_check(61.0); }) == ErrorKind::Domain);
}

TEST_CASE("verifier config validation") {
  VerifierConfig c;
  c.quad_rel_tol = 0.1;
  CHECK(kind_of([&] { validate(c); }) == ErrorKind::InvalidArgument);
  c = {};
  c.taylor_N = 1;
  CHECK(kind_of([&] { validate(c); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("identity suite reports every check") {
  const auto checks = identity_suite();
  CHECK(checks.size() >= 10);
  for (const auto& c : checks) {
    CAPTURE(c.name);
    CHECK(c.passed == (c.value <= c.tolerance));
    if (c.name.rfind("sin^4 truncation", 0) != 0) CHECK(c.passed);
  }
}
