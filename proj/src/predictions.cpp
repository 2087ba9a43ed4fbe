#include "pmom/predictions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pmom/error.hpp"
#include "pmom/quadrature.hpp"
#include "pmom/special_functions.hpp"

namespace pmom {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::Domain, what);
}

void check_lambda(double lambda) {
  require(lambda > 0.0 && lambda <= 60.0, "order must satisfy 0 < lambda <= 60");
}

// log of Gamma(l+1) / (Gamma(l/2 + 2) 2^(l/2))
double log_scaled_constant(double lambda) {
  return log_gamma(lambda + 1.0) - log_gamma(lambda / 2.0 + 2.0) - lambda / 2.0 * std::log(2.0);
}

}  // namespace

double Constants::B() { return 1.0 - C0 - std::log(kTwoPi); }
double Constants::E() { return kTwoPi * std::exp(C0 - 1.0); }

std::string to_string(Formula f) {
  switch (f) {
    case Formula::Thm1Main: return "thm1";
    case Formula::Thm2Main: return "thm2";
    case Formula::Conj1: return "conj1";
    case Formula::Conj2: return "conj2";
    case Formula::MS11: return "ms11";
    case Formula::MS13: return "ms13";
    case Formula::OddNormalizer: return "odd";
  }
  return "conj2";
}

Formula parse_formula(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "thm1" || s == "thm1main") return Formula::Thm1Main;
  if (s == "thm2" || s == "thm2main") return Formula::Thm2Main;
  if (s == "conj1") return Formula::Conj1;
  if (s == "conj2") return Formula::Conj2;
  if (s == "ms11") return Formula::MS11;
  if (s == "ms13") return Formula::MS13;
  if (s == "odd" || s == "oddnormalizer" || s == "odd_normalizer") return Formula::OddNormalizer;
  fail(ErrorKind::InvalidArgument, "unknown formula '" + std::string(text) + "'");
}

bool is_scaled_family(Formula f) {
  return f == Formula::Thm2Main || f == Formula::Conj2 || f == Formula::MS13 ||
         f == Formula::OddNormalizer;
}

double thm1_main(double X, double h, double lambda) {
  require(h > 0.0 && h < X, "thm1_main requires 0 < h < X");
  check_lambda(lambda);
  const double half = lambda / 2.0;
  return gaussian_abs_moment(lambda) * X * std::pow(h, half) * std::pow(std::log(X / h), half);
}

double thm2_main(double X, double delta, double lambda) {
  require(delta > 0.0 && delta < 1.0, "thm2_main requires 0 < delta < 1");
  require(X > 0.0, "thm2_main requires X > 0");
  check_lambda(lambda);
  const double half = lambda / 2.0;
  return std::exp(log_scaled_constant(lambda) + (half + 1.0) * std::log(X) + half * std::log(delta) +
                  half * std::log(std::log(1.0 / delta)));
}

double conjecture1_integral(double X_over_h, double lambda) {
  check_lambda(lambda);
  const double E = Constants::E();
  require(X_over_h > 0.0, "conjecture1 requires X/h > 0");
  double T = std::log(X_over_h) - std::log(E);
  if (std::fabs(T) <= 64.0 * std::numeric_limits<double>::epsilon()) T = 0.0;
  require(T >= 0.0, "conjecture1 requires X/h >= E");
  if (T == 0.0) return 0.0;
  const double half = lambda / 2.0;
  const auto r = integrate([half](double t) { return std::pow(t, half) * std::exp(t); }, 0.0, T,
                           QuadOptions{.rel_tol = 1e-13, .abs_tol = 0.0, .max_intervals = 4000});
  return E * r.value;
}

double conjecture1(double X, double h, double lambda) {
  require(h > 0.0 && X > 0.0, "conjecture1 requires positive X and h");
  check_lambda(lambda);
  const double integral = conjecture1_integral(X / h, lambda);
  return gaussian_abs_moment(lambda) * std::pow(h, lambda / 2.0 + 1.0) * integral;
}

double conjecture2(double X, double delta, double lambda) {
  require(delta > 0.0, "conjecture2 requires delta > 0");
  require(Constants::E() * delta < 1.0, "conjecture2 requires E * delta < 1");
  require(X > 0.0, "conjecture2 requires X > 0");
  check_lambda(lambda);
  const double half = lambda / 2.0;
  return std::exp(log_scaled_constant(lambda) + (half + 1.0) * std::log(X) + half * std::log(delta) +
                  half * std::log(std::log(1.0 / (Constants::E() * delta))));
}

double odd_normalizer(double X, double delta, int n) {
  require(n >= 1 && n % 2 == 1, "odd_normalizer requires an odd positive n");
  return thm2_main(X, delta, n);
}

double ms_main(double X, double width, int k, Formula family) {
  require(family == Formula::MS11 || family == Formula::MS13, "ms_main family must be MS11 or MS13");
  require(k >= 1, "ms_main requires k >= 1");
  require(k <= 60, "ms_main requires k <= 60");
  if (k % 2 == 1) return 0.0;
  const double mu = gaussian_moment_even(k);
  const int half = k / 2;
  const double B = Constants::B();
  if (family == Formula::MS13) {
    require(width > 0.0 && width < 1.0, "MS13 requires 0 < delta < 1");
    return mu / (half + 1.0) * std::pow(X, half + 1.0) * std::pow(width, half) *
           std::pow(std::log(1.0 / width) + B, half);
  }
  require(width > 0.0 && X >= 1.0, "MS11 requires h > 0 and X >= 1");
  const double shift = B - std::log(width);
  // x = e^s turns the integrand into a polynomial times exp.
  const auto r = integrate([half, shift](double s) { return std::pow(s + shift, half) * std::exp(s); },
                           0.0, std::log(X), QuadOptions{.rel_tol = 1e-13, .abs_tol = 0.0, .max_intervals = 4000});
  return mu * std::pow(width, half) * r.value;
}

Prediction evaluate(const PredictionInput& in) {
  Prediction p;
  const double X = in.X;
  const double w = in.width;
  require(X > 1.0, "prediction requires X > 1");
  if (is_scaled_family(in.formula)) {
    if (w < std::pow(X, -1.0 + kNominalEpsilon) || w > std::pow(X, -kNominalEpsilon))
      p.warnings.push_back("delta outside the nominal range [X^(-1+eps), X^(-eps)], eps=" +
                           std::to_string(kNominalEpsilon));
  } else {
    if (w < std::pow(X, kNominalEpsilon) || w > std::pow(X, 1.0 - kNominalEpsilon))
      p.warnings.push_back("h outside the nominal range [X^eps, X^(1-eps)], eps=" +
                           std::to_string(kNominalEpsilon));
  }
  auto integer_order = [&]() {
    require(in.order == std::floor(in.order), "formula needs an integer order");
    return static_cast<int>(in.order);
  };
  switch (in.formula) {
    case Formula::Thm1Main: p.value = thm1_main(X, w, in.order); break;
    case Formula::Thm2Main: p.value = thm2_main(X, w, in.order); break;
    case Formula::Conj1: p.value = conjecture1(X, w, in.order); break;
    case Formula::Conj2: p.value = conjecture2(X, w, in.order); break;
    case Formula::MS11: p.value = ms_main(X, w, integer_order(), Formula::MS11); break;
    case Formula::MS13: p.value = ms_main(X, w, integer_order(), Formula::MS13); break;
    case Formula::OddNormalizer: p.value = odd_normalizer(X, w, integer_order()); break;
  }
  return p;
}

}  // namespace pmom
