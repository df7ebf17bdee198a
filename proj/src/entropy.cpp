#include "rllink/entropy.hpp"

#include <cmath>

#include "rllink/errors.hpp"

namespace rllink {

double binary_entropy(double a) {
  if (a < 0.0 || a > 1.0) throw ValidationError("binary_entropy: argument outside [0,1]");
  if (a <= 0.0 || a >= 1.0) return 0.0;
  return -a * std::log2(a) - (1.0 - a) * std::log2(1.0 - a);
}

double entropy_inverse(double r) {
  if (r < 0.0 || r > 1.0) throw ValidationError("entropy_inverse: argument outside [0,1]");
  if (r <= 0.0) return 0.0;
  if (r >= 1.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  // H is strictly increasing on [0, 1/2]; plain bisection is fine.
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (binary_entropy(mid) < r ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double binomial_pmf(int n, int i, double q) {
  if (i < 0 || n < 0 || n > i) return 0.0;
  if (q <= 0.0) return n == 0 ? 1.0 : 0.0;
  if (q >= 1.0) return n == i ? 1.0 : 0.0;
  double log_c = std::lgamma(i + 1.0) - std::lgamma(n + 1.0) - std::lgamma(i - n + 1.0);
  return std::exp(log_c + n * std::log(q) + (i - n) * std::log(1.0 - q));
}

}  // namespace rllink
