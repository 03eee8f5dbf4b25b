#include "permean/theta_binom.hpp"

#include <cmath>
#include <string>

#include "permean/errors.hpp"

namespace permean::theta_binom {

namespace {

// Doubles carry theta <= 50; coefficients grow like n^{theta-1} and the
// error analysis is only done for that range. Exact mode has no cap.
void require_theta(double theta) {
    if (!(theta > 0.0))
        throw validation_error("theta must be positive, got " + std::to_string(theta));
    if (theta > 50.0)
        throw validation_error("theta > 50 is not supported in float mode");
}

void require_n(int n) {
    if (n < 0)
        throw validation_error("n must be nonnegative, got " + std::to_string(n));
}

} // namespace

double pochhammer(double theta, int n) {
    require_theta(theta);
    require_n(n);
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= theta + k;
    return r;
}

double pochhammer_ratio(double a, double b, int n) {
    if (!(a >= 0.0)) throw validation_error("pochhammer_ratio: a must be >= 0");
    if (!(b > 0.0)) throw validation_error("pochhammer_ratio: b must be > 0");
    require_n(n);
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= (a + k) / (b + k);
    return r;
}

double coeff_plus(double theta, int n) {
    require_theta(theta);
    require_n(n);
    double a = 1.0;
    for (int k = 1; k <= n; ++k) a *= (theta + k - 1) / k;
    return a;
}

double coeff_minus(double theta, int n) {
    require_theta(theta);
    require_n(n);
    double c = 1.0;
    for (int k = 1; k <= n; ++k) c *= (k - 1 - theta) / k;
    return c;
}

ThetaWeights build_weights(double theta, int N) {
    require_theta(theta);
    require_n(N);
    ThetaWeights w;
    w.theta = theta;
    w.plus.resize(N + 1);
    w.minus.resize(N + 1);
    w.plus[0] = 1.0;
    w.minus[0] = 1.0;
    for (int k = 1; k <= N; ++k) {
        w.plus[k] = w.plus[k - 1] * (theta + k - 1) / k;
        w.minus[k] = w.minus[k - 1] * (k - 1 - theta) / k;
    }
    return w;
}

BigRational pochhammer_exact(const BigRational& theta, int n) {
    if (!(theta > 0)) throw validation_error("theta must be positive");
    require_n(n);
    BigRational r = 1;
    for (int k = 0; k < n; ++k) r *= theta + k;
    return r;
}

BigRational coeff_plus_exact(const BigRational& theta, int n) {
    if (!(theta > 0)) throw validation_error("theta must be positive");
    require_n(n);
    BigRational a = 1;
    for (int k = 1; k <= n; ++k) a *= (theta + (k - 1)) / k;
    return a;
}

BigRational coeff_minus_exact(const BigRational& theta, int n) {
    if (!(theta > 0)) throw validation_error("theta must be positive");
    require_n(n);
    BigRational c = 1;
    for (int k = 1; k <= n; ++k) c *= (BigRational(k - 1) - theta) / k;
    return c;
}

} // namespace permean::theta_binom
