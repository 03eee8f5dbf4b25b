#pragma once

#include <vector>

#include "permean/rational.hpp"

namespace permean::theta_binom {

// Coefficient tables of (1-z)^{-theta} (plus) and (1-z)^{theta} (minus),
// truncated at order N. plus[k] > 0 for theta > 0; the two sequences
// convolve to the identity series.
struct ThetaWeights {
    double theta = 0;
    std::vector<double> plus;
    std::vector<double> minus;

    int order() const { return static_cast<int>(plus.size()) - 1; }
};

// Rising factorial theta*(theta+1)*...*(theta+n-1); 1 for n = 0.
double pochhammer(double theta, int n);

// prod_{k=0}^{n-1} (a+k)/(b+k), the overflow-safe form of
// pochhammer(a,n)/pochhammer(b,n). a = 0 is allowed (the product is 0).
double pochhammer_ratio(double a, double b, int n);

// [z^n](1-z)^{-theta}, via a_0 = 1, a_k = a_{k-1}*(theta+k-1)/k.
double coeff_plus(double theta, int n);

// [z^n](1-z)^{theta}, via c_0 = 1, c_k = c_{k-1}*(k-1-theta)/k.
double coeff_minus(double theta, int n);

ThetaWeights build_weights(double theta, int N);

// Exact-rational mode, used by the oracle comparisons.
BigRational pochhammer_exact(const BigRational& theta, int n);
BigRational coeff_plus_exact(const BigRational& theta, int n);
BigRational coeff_minus_exact(const BigRational& theta, int n);

} // namespace permean::theta_binom
