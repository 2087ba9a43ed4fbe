#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pmom/error.hpp"
#include "pmom/predictions.hpp"
#include "pmom/special_functions.hpp"

using namespace pmom;

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

constexpr double kOrders[] = {1.0, 2.1, 3.2, 4.3, 5.4, 6.5};

}  // namespace

TEST_CASE("constants derive from Euler's constant") {
  CHECK(std::fabs(Constants::B() - (-1.4150928)) <= 1e-6);
  CHECK(std::fabs(Constants::E() - 2 * std::numbers::pi * std::exp(std::numbers::egamma - 1)) <= 1e-12);
  CHECK(std::fabs(Constants::E() - 4.1168682) <= 1e-6);
}

TEST_CASE("published formula column, X = 1e8, delta = 1e-4") {
  const double want[] = {1.4851e10, 6.9344e12, 4.6213e15, 3.8864e18, 3.8768e21, 4.4213e24};
  for (int i = 0; i < 6; ++i) CHECK(oracle::rel(conjecture2(1e8, 1e-4, kOrders[i]), want[i]) <= 5e-4);
}

TEST_CASE("published formula column, X = 1e10, delta = 1e-5") {
  const double want[] = {5.3452e12, 1.0210e16, 2.7835e19, 9.5764e22, 3.9079e26, 1.8232e30};
  for (int i = 0; i < 6; ++i) CHECK(oracle::rel(conjecture2(1e10, 1e-5, kOrders[i]), want[i]) <= 5e-4);
}

TEST_CASE("published odd normalizers") {
  CHECK(oracle::rel(odd_normalizer(1e8, 1e-4, 1), 1.6143e10) <= 5e-4);
  CHECK(oracle::rel(odd_normalizer(1e8, 1e-4, 3), 1.7842e15) <= 5e-4);
  CHECK(oracle::rel(odd_normalizer(1e8, 1e-4, 5), 4.6952e20) <= 5e-4);
  CHECK(oracle::rel(odd_normalizer(1e10, 1e-5, 1), 5.7074e12) <= 5e-4);
  CHECK(oracle::rel(odd_normalizer(1e10, 1e-5, 3), 7.8851e18) <= 5e-4);
  CHECK(oracle::rel(odd_normalizer(1e10, 1e-5, 5), 2.5937e25) <= 5e-4);
  CHECK(oracle::rel(thm2_main(1e8, 1e-4, 1), 1.6143e10) <= 5e-4);
  CHECK(kind_of([] { odd_normalizer(1e8, 1e-4, 2); }) == ErrorKind::Domain);
}

TEST_CASE("thm1 main term") {
  CHECK(oracle::rel(thm1_main(1e8, 1e4, 1), 0.7978845608028654 * 1e8 * 100 * std::sqrt(std::log(1e4))) <= 1e-12);
  CHECK(oracle::rel(thm1_main(1e8, 1e4, 1), 2.42146e10) <= 1e-5);
  CHECK(oracle::rel(thm1_main(1e6, 50, 2), 1e6 * 50 * std::log(1e6 / 50)) <= 1e-12);
  const double h = 1000, X = std::exp(1.0) * h;
  CHECK(oracle::rel(thm1_main(X, h, 4), 3 * X * h * h) <= 1e-12);
  CHECK(kind_of([] { thm1_main(10, 10, 1); }) == ErrorKind::Domain);
}

TEST_CASE("thm2 main term") {
  const double d = std::exp(-1.0);
  CHECK(oracle::rel(thm2_main(1000, d, 2), 1e6 * d / 2) <= 1e-12);
  CHECK(oracle::rel(thm2_main(1e10, 1e-5, 5), 2.5937e25) <= 5e-4);
  // Even orders through (k-1)!!: Gamma(k+1) / (Gamma(k/2+2) 2^(k/2)) = (k-1)!! / (k/2+1).
  for (const int k : {2, 4, 6, 8}) {
    const double c = gaussian_moment_even(k) / (k / 2 + 1.0);
    const double want = c * std::pow(1e6, k / 2 + 1.0) * std::pow(1e-3, k / 2.0) * std::pow(std::log(1e3), k / 2.0);
    CHECK(oracle::rel(thm2_main(1e6, 1e-3, k), want) <= 1e-10);
    const double want1 = gaussian_moment_even(k) * 1e6 * std::pow(100.0, k / 2.0) * std::pow(std::log(1e4), k / 2.0);
    CHECK(oracle::rel(thm1_main(1e6, 100, k), want1) <= 1e-10);
  }
  CHECK(kind_of([] { thm2_main(1e6, 1.0, 1); }) == ErrorKind::Domain);
}

TEST_CASE("conj2 relates to thm2 by the log ratio") {
  for (const double l : kOrders) {
    for (const auto [X, d] : {std::pair{1e8, 1e-4}, {1e10, 1e-5}, {1e6, 0.05}}) {
      const double ratio = std::log(1 / (Constants::E() * d)) / std::log(1 / d);
      CHECK(oracle::rel(conjecture2(X, d, l), thm2_main(X, d, l) * std::pow(ratio, l / 2)) <= 1e-12);
    }
  }
  CHECK(kind_of([] { conjecture2(1e8, 0.25, 1); }) == ErrorKind::Domain);
}

TEST_CASE("conj1 against integration by parts") {
  const double E = Constants::E();
  const double X = 1e8, h = 1e4, r = X / h, T = std::log(r / E);
  // k = 2: int_E^r log(x/E) dx = r (T - 1) + E
  const double i2 = r * (T - 1) + E;
  CHECK(oracle::rel(conjecture1(X, h, 2), h * h * i2) <= 1e-9);
  CHECK(oracle::rel(conjecture1(X, h, 2), 6.7957e12) <= 1e-4);
  // k = 4: 3 h^3 int_E^r log(x/E)^2 dx = 3 h^3 (r (T^2 - 2T + 2) - 2E)
  const double i4 = r * (T * T - 2 * T + 2) - 2 * E;
  CHECK(oracle::rel(conjecture1(X, h, 4), 3 * h * h * h * i4) <= 1e-9);
  CHECK(conjecture1(E * 1000, 1000, 2) == 0.0);
  CHECK(kind_of([] { conjecture1(10, 5, 2); }) == ErrorKind::Domain);
}

TEST_CASE("conj1 quadrature is self-convergent") {
  const double a = conjecture1_integral(1e4, 1.0);
  // Independent evaluation: Simpson in t on [0, T].
  const double T = std::log(1e4 / Constants::E());
  const int n = 200000;
  const double step = T / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = i * step;
    const double f = std::sqrt(t) * std::exp(t);
    s += (i == 0 || i == n ? 1 : (i % 2 ? 4 : 2)) * f;
  }
  CHECK(oracle::rel(a, Constants::E() * s * step / 3) <= 1e-7);
}

TEST_CASE("MS main terms") {
  const double B = Constants::B();
  const double want = 100 * (1e6 * (std::log(1e4) + B - 1) + 1 + std::log(100.0) - B);
  CHECK(oracle::rel(ms_main(1e6, 100, 2, Formula::MS11), want) <= 1e-10);
  CHECK(oracle::rel(ms_main(1e6, 100, 2, Formula::MS11), 6.79526e8) <= 1e-5);
  CHECK(ms_main(1e6, 100, 3, Formula::MS11) == 0.0);
  CHECK(ms_main(1e6, 1e-3, 5, Formula::MS13) == 0.0);
  CHECK(oracle::rel(ms_main(1e6, 1e-3, 2, Formula::MS13), 0.5 * 1e12 * 1e-3 * (std::log(1e3) + B)) <= 1e-12);
  CHECK(oracle::rel(ms_main(1e6, 1e-3, 4, Formula::MS13), 1.0 * 1e18 * 1e-6 * std::pow(std::log(1e3) + B, 2)) <= 1e-12);
  CHECK(kind_of([] { ms_main(1e6, 100, 0, Formula::MS11); }) == ErrorKind::Domain);
}

TEST_CASE("evaluate dispatches and warns outside the nominal range") {
  const auto p = evaluate({1e8, 1e-4, 1.0, Formula::Conj2});
  CHECK(p.value == conjecture2(1e8, 1e-4, 1.0));
  CHECK(p.warnings.empty());
  const auto q = evaluate({1e8, 0.2, 1.0, Formula::Thm2Main});
  CHECK(!q.warnings.empty());
  const auto r = evaluate({1e8, 2, 1.0, Formula::Thm1Main});
  CHECK(!r.warnings.empty());
  CHECK(evaluate({1e8, 1e4, 2, Formula::Conj1}).value == conjecture1(1e8, 1e4, 2));
  CHECK(kind_of([] { evaluate({1e8, 1e-4, 1.5, Formula::OddNormalizer}); }) == ErrorKind::Domain);
  CHECK(to_string(parse_formula("conj2")) == "conj2");
  CHECK(kind_of([] { parse_formula("nope"); }) == ErrorKind::InvalidArgument);
}
