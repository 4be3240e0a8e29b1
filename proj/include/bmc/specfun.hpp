#ifndef BMC_SPECFUN_HPP
#define BMC_SPECFUN_HPP

namespace bmc {

/// Exponential integral E1(x) = int_x^inf e^{-t}/t dt, for x > 0.
/// Throws std::domain_error for x <= 0.
double exp_integral_e1(double x);

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b).
double log_beta(double a, double b);

/// ln z! generalized to real z > -1 as ln Gamma(z + 1).
double log_factorial(double z);

/// ln of the binomial coefficient C(n, k) for 0 <= k <= n.
double log_choose(int n, int k);

}  // namespace bmc

#endif  // BMC_SPECFUN_HPP
