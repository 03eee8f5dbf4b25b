#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "permean/series.hpp"

namespace permean::ewens {

using series::Complex;
using series::TruncatedSeries;

// The values fhat(1..n) defining a multiplicative function on S_n;
// fhat(j) = 1 is implied for j > n.
struct MultiplicativeSpec {
    int n = 0;
    std::vector<Complex> fhat;

    MultiplicativeSpec(int n_, std::vector<Complex> fhat_);

    // Shipped families.
    static MultiplicativeSpec constant(int n, Complex u);
    static MultiplicativeSpec unimodular(int n, double tau);
    static MultiplicativeSpec zero_on(int n, const std::vector<int>& lengths);
    static MultiplicativeSpec random_disk(int n, std::uint64_t seed);

    bool in_unit_disk(double slack = 1e-12) const;
};

struct MeanReport {
    int n = 0;
    double theta = 0;
    double p = 0;
    Complex mean;       // M_n(f)
    Complex n_coeff;    // N_n
    double weight = 0;  // [z^n](1-z)^{-theta}
    Complex asymptotic; // exp(theta * sum (fhat(k)-1)/k)
    double mu = 0;      // mu_n(p)
    double residual = 0;
    double ratio = 0;   // residual/mu; +inf sentinel when mu=0, residual>0
};

// L_n(z) = sum_{j<=n} (fhat(j)-1)/j z^j, zero-padded to `order`.
TruncatedSeries l_series(const MultiplicativeSpec& spec, int order);

// N_0..N_N of F(z) = exp(theta sum fhat(j) z^j / j), computed two ways
// and cross-checked: (a) exp(theta L_n) * (1-z)^{-theta}, (b) direct
// exp. Disagreement beyond 1e-9 throws cross_check_error. Returns (a).
TruncatedSeries big_n_coeffs(const MultiplicativeSpec& spec, double theta, int N);

// M_n(f) = N_n / [z^n](1-z)^{-theta}.
Complex mean_value(const MultiplicativeSpec& spec, double theta);

// ((1/n) sum |fhat(k)-1|^p)^{1/p}.
double mu_n(const MultiplicativeSpec& spec, double p);

// Requires p > max(1, 1/theta) and |fhat(j)| <= 1.
MeanReport thm3_residual(const MultiplicativeSpec& spec, double theta, double p);

} // namespace permean::ewens
