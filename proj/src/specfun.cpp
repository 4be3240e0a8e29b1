#include "bmc/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bmc {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
double e1_series(double x) {
  double sum = 0.0;
  double term = 1.0;  // (-x)^k / k!
  for (int k = 1; k <= kMaxIterations; ++k) {
    term *= -x / k;
    const double contrib = term / k;
    sum += contrib;
    if (std::abs(contrib) < std::abs(sum) * kEps) {
      return -std::numbers::egamma - std::log(x) - sum;
    }
  }
  throw std::logic_error("exp_integral_e1: power series did not converge");
}

// Modified Lentz evaluation of the continued fraction
// E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...))).
double e1_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      return h * std::exp(-x);
    }
  }
  throw std::logic_error("exp_integral_e1: continued fraction did not converge");
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0)) {
    throw std::domain_error(std::string(what) + ": argument must be positive, got " +
                            std::to_string(x));
  }
}

}  // namespace

double exp_integral_e1(double x) {
  require_positive(x, "exp_integral_e1");
  if (std::isinf(x)) return 0.0;
  return x <= 1.0 ? e1_series(x) : e1_continued_fraction(x);
}

double log_gamma(double x) {
  require_positive(x, "log_gamma");
  // lgamma_r avoids the global signgam write of lgamma.
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double log_beta(double a, double b) {
  require_positive(a, "log_beta");
  require_positive(b, "log_beta");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double log_factorial(double z) {
  if (!(z > -1.0)) {
    throw std::domain_error("log_factorial: argument must exceed -1");
  }
  return log_gamma(z + 1.0);
}

double log_choose(int n, int k) {
  if (n < 0 || k < 0 || k > n) {
    throw std::domain_error("log_choose: require 0 <= k <= n");
  }
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

}  // namespace bmc
