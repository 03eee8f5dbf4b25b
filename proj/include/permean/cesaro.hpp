#pragma once

#include <complex>
#include <string>
#include <vector>

#include "permean/series.hpp"

namespace permean::cesaro {

using series::Complex;
using series::CoeffStream;
using series::TruncatedSeries;

// A formal series sum a_k together with the machinery to evaluate it at
// Abel points: a replayable coefficient stream with a tail envelope,
// and optionally an exact closed-form evaluator (used e.g. when f is
// exp of a polynomial).
struct SummabilityInput {
    CoeffStream coeffs;
    std::function<Complex(double)> closed_form; // optional
    std::string label;

    Complex coeff(std::size_t k) const { return coeffs.at(k); }
    // f(x): closed form when available, else certified tail summation.
    Complex abel_value(double x, double tol = 1e-13) const;

    static SummabilityInput from_series(const TruncatedSeries& s, std::string label);
    // a_k = (-1)^k
    static SummabilityInput alternating_unit();
    // a_k = (-1)^k k
    static SummabilityInput alternating_linear();
    // a_k = [k==0]
    static SummabilityInput delta();
    // f(z) = exp(theta*L(z)) for a fixed polynomial L; coefficients are
    // precomputed to `order`, the Abel value is exact (poly eval + exp).
    static SummabilityInput exp_poly(const TruncatedSeries& l_poly, double theta,
                                     int order, std::string label);
};

// (C,p) mean at n: (1/a_n^+) sum_{k<=n} a_k a_{n-k}^+ with theta = p+1.
Complex cesaro_mean(const SummabilityInput& a, double p, int n);

// S_theta(f;n) = sum_{k=1..n} k a_k [z^{n-k}](1-z)^{-theta}.
Complex s_theta(const SummabilityInput& a, double theta, int n);

// S_theta(f;j) for all 0 <= j <= J. OpenMP kernel plus the serial
// reference; bitwise-identical outputs.
std::vector<Complex> s_theta_prefix(const SummabilityInput& a, double theta, int J);
std::vector<Complex> s_theta_prefix_serial(const SummabilityInput& a, double theta, int J);

struct Thm1Report {
    int n = 0;
    double theta = 0;
    Complex cesaro;   // (C,theta-1) mean at n
    Complex abel;     // f(e^{-1/n})
    Complex drift;    // S_theta(f;n)/(n a_n^+)
    double lhs = 0;   // |cesaro - abel - drift|
    double majorant = 0;
    double ratio = 0; // lhs/majorant; NaN when majorant == 0
    long j_cap = 0;   // truncation J = ceil(j_cap_factor * n)
    double witness = 0; // last included term / accumulated majorant
};

// Residual and majorant of the Cesaro-vs-Abel bound. Throws
// cross_check_error when the truncation witness exceeds 1e-12 (raise
// j_cap_factor).
Thm1Report thm1_residual(const SummabilityInput& a, double theta, int n,
                         double j_cap_factor = 40.0);

struct TauberReport {
    double p = 0;
    std::vector<long> grid;
    std::vector<Complex> abel;
    std::vector<Complex> cesaro;
    std::vector<double> second; // S_{p+1}(f;n)/n^{p+1}
    bool abel_converged = false;
    bool cesaro_converged = false;
    bool second_vanishes = false;
    bool summable = false;
    Complex limit; // the common value A when summable
    std::string verdict;
};

// Abel values, (C,p) means and the S_{p+1}/n^{p+1} sequence over a
// geometric grid (halving down from N, smallest point >= min(N,50)).
// Verdict per the equivalence: Abel limit exists and the second
// condition vanishes iff (C,p) summable to the same A. Non-convergence
// is a verdict, not an error.
TauberReport tauber_conditions(const SummabilityInput& a, double p, long N,
                               double cauchy_tol = 1e-3);

// max_{1<=n<=N} | n a_n - sum_{k<=n} S_theta(f;k) [z^{n-k}](1-z)^{theta} |.
double inversion_check(const SummabilityInput& a, double theta, int N);

} // namespace permean::cesaro
