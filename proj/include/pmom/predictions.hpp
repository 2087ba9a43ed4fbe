#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pmom {

// Euler's constant is the single stored value; B and E derive from it.
struct Constants {
  static constexpr double C0 = 0.57721566490153286061;
  static double B();  // 1 - C0 - log(2 pi)
  static double E();  // 2 pi exp(C0 - 1)
};

enum class Formula { Thm1Main, Thm2Main, Conj1, Conj2, MS11, MS13, OddNormalizer };

std::string to_string(Formula f);
Formula parse_formula(std::string_view text);
bool is_scaled_family(Formula f);

struct PredictionInput {
  double X = 0.0;
  double width = 0.0;  // h for Thm1Main/Conj1/MS11, delta otherwise
  double order = 1.0;  // lambda, or the integer k / n where required
  Formula formula = Formula::Conj2;
};

struct Prediction {
  double value = 0.0;
  std::vector<std::string> warnings;
};

// Nominal epsilon for the X^eps <= h <= X^(1-eps) style ranges; outside
// them a warning is attached, never an error.
inline constexpr double kNominalEpsilon = 0.1;

Prediction evaluate(const PredictionInput& input);

double thm1_main(double X, double h, double lambda);
double thm2_main(double X, double delta, double lambda);
double conjecture1(double X, double h, double lambda);
double conjecture2(double X, double delta, double lambda);
double odd_normalizer(double X, double delta, int n);
double ms_main(double X, double width, int k, Formula family);

// int_E^(X/h) (log(x/E))^(lambda/2) dx via t = log(x/E).
double conjecture1_integral(double X_over_h, double lambda);

}  // namespace pmom
