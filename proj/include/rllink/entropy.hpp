#pragma once

namespace rllink {

// Binary entropy in bits, H(0) = H(1) = 0.
double binary_entropy(double a);

// Inverse of binary_entropy on [0, 1/2], solved by bisection to 1e-12.
double entropy_inverse(double r);

// Binomial pmf C(i,n) q^n (1-q)^(i-n), evaluated in log space; the q = 0 and
// q = 1 endpoints are handled exactly.
double binomial_pmf(int n, int i, double q);

}  // namespace rllink
