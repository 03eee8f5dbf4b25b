#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "permean/theta_binom.hpp"

namespace permean::series {

using Complex = std::complex<double>;

// A power series mod z^{N+1}: coefficients c_0..c_N. Arithmetic between
// two series truncates at the smaller order and never claims
// coefficients beyond it.
struct TruncatedSeries {
    std::vector<Complex> coeffs;

    TruncatedSeries() = default;
    explicit TruncatedSeries(std::vector<Complex> c) : coeffs(std::move(c)) {}

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    Complex at(int k) const; // validates 0 <= k <= order

    static TruncatedSeries zero(int order);
    static TruncatedSeries one(int order);
    static TruncatedSeries from_weights_plus(const theta_binom::ThetaWeights& w);
};

TruncatedSeries scale(const TruncatedSeries& a, Complex s);
TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b);

// Cauchy product, truncated at min(order_a, order_b). `mul` is the
// OpenMP kernel; `mul_serial` is the reference kept for testing. Both
// produce bitwise-identical results.
TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries mul_serial(const TruncatedSeries& a, const TruncatedSeries& b);

// exp of a series with zero constant term, by the Newton identity
// h_0 = 1, h_m = (1/m) sum_{j=1..m} j g_j h_{m-j}.
TruncatedSeries exp_series(const TruncatedSeries& g);

// Coefficients of z*a'(z): k*a_k at index k.
TruncatedSeries derivative_shift(const TruncatedSeries& a);

// Coefficient bound |a_k| <= scale*(k+1)^degree, the tail certificate
// for Abel-point evaluation.
struct Envelope {
    double scale = 1.0;
    double degree = 0.0;
};

// Replayable indexed coefficient stream. finite_order, when set, marks
// an exact polynomial: evaluation stops there with no tail estimate.
struct CoeffStream {
    std::function<Complex(std::size_t)> at;
    Envelope envelope;
    std::optional<std::size_t> finite_order;

    static CoeffStream from_series(const TruncatedSeries& s);
};

// sum_k a_k x^k for 0 <= x < 1, summed until the envelope certifies the
// remaining tail below tol. Throws cross_check_error if the certificate
// is not reached within hard_cap terms.
Complex eval_tail(const CoeffStream& a, double x, double tol,
                  std::size_t hard_cap = 200'000'000);

} // namespace permean::series
