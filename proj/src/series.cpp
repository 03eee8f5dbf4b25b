#include "permean/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "permean/errors.hpp"

namespace permean::series {

Complex TruncatedSeries::at(int k) const {
    if (k < 0 || k > order())
        throw validation_error("series coefficient index " + std::to_string(k) +
                               " outside truncation order " + std::to_string(order()));
    return coeffs[static_cast<std::size_t>(k)];
}

TruncatedSeries TruncatedSeries::zero(int order) {
    return TruncatedSeries(std::vector<Complex>(static_cast<std::size_t>(order) + 1));
}

TruncatedSeries TruncatedSeries::one(int order) {
    auto s = zero(order);
    s.coeffs[0] = 1.0;
    return s;
}

TruncatedSeries TruncatedSeries::from_weights_plus(const theta_binom::ThetaWeights& w) {
    std::vector<Complex> c(w.plus.begin(), w.plus.end());
    return TruncatedSeries(std::move(c));
}

TruncatedSeries scale(const TruncatedSeries& a, Complex s) {
    TruncatedSeries r = a;
    for (auto& c : r.coeffs) c *= s;
    return r;
}

TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b) {
    const int n = std::min(a.order(), b.order());
    TruncatedSeries r = TruncatedSeries::zero(n);
    for (int k = 0; k <= n; ++k) r.coeffs[k] = a.coeffs[k] + b.coeffs[k];
    return r;
}

namespace {

inline Complex conv_at(const TruncatedSeries& a, const TruncatedSeries& b, int k) {
    const int lo = std::max(0, k - b.order());
    const int hi = std::min(k, a.order());
    Complex acc = 0.0;
    for (int j = lo; j <= hi; ++j) acc += a.coeffs[j] * b.coeffs[k - j];
    return acc;
}

} // namespace

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) {
    const int n = std::min(a.order(), b.order());
    TruncatedSeries r = TruncatedSeries::zero(n);
#pragma omp parallel for schedule(static)
    for (int k = 0; k <= n; ++k) r.coeffs[k] = conv_at(a, b, k);
    return r;
}

TruncatedSeries mul_serial(const TruncatedSeries& a, const TruncatedSeries& b) {
    const int n = std::min(a.order(), b.order());
    TruncatedSeries r = TruncatedSeries::zero(n);
    for (int k = 0; k <= n; ++k) r.coeffs[k] = conv_at(a, b, k);
    return r;
}

TruncatedSeries exp_series(const TruncatedSeries& g) {
    if (g.coeffs.empty() || g.coeffs[0] != 0.0)
        throw validation_error("exp_series requires a zero constant term");
    const int n = g.order();
    TruncatedSeries h = TruncatedSeries::zero(n);
    h.coeffs[0] = 1.0;
    for (int m = 1; m <= n; ++m) {
        Complex acc = 0.0;
        for (int j = 1; j <= m; ++j)
            acc += static_cast<double>(j) * g.coeffs[j] * h.coeffs[m - j];
        h.coeffs[m] = acc / static_cast<double>(m);
    }
    return h;
}

TruncatedSeries derivative_shift(const TruncatedSeries& a) {
    TruncatedSeries r = a;
    for (int k = 0; k <= r.order(); ++k) r.coeffs[k] *= static_cast<double>(k);
    return r;
}

CoeffStream CoeffStream::from_series(const TruncatedSeries& s) {
    double peak = 0.0;
    for (const auto& c : s.coeffs) peak = std::max(peak, std::abs(c));
    CoeffStream st;
    const auto coeffs = s.coeffs;
    st.at = [coeffs](std::size_t k) -> Complex {
        return k < coeffs.size() ? coeffs[k] : Complex(0.0);
    };
    st.envelope = Envelope{std::max(peak, 1e-300), 0.0};
    st.finite_order = s.coeffs.size() - 1;
    return st;
}

Complex eval_tail(const CoeffStream& a, double x, double tol, std::size_t hard_cap) {
    if (!(x >= 0.0 && x < 1.0))
        throw validation_error("eval_tail requires 0 <= x < 1");
    if (!(tol > 0.0)) throw validation_error("eval_tail requires tol > 0");

    Complex acc = 0.0;
    double xk = 1.0; // x^k

    if (a.finite_order) { // exact polynomial evaluation, tol plays no part
        for (std::size_t k = 0; k <= *a.finite_order; ++k) {
            acc += a.at(k) * xk;
            xk *= x;
        }
        return acc;
    }

    const double s = a.envelope.scale;
    const double d = a.envelope.degree;

    for (std::size_t k = 0;; ++k) {
        if (k > hard_cap)
            throw cross_check_error(
                "eval_tail: envelope did not certify the tail below tolerance "
                "within the term cap");
        acc += a.at(k) * xk;
        // Tail certificate: term bounds t_j = s (j+1)^d x^j decrease by at
        // least r = x (1+1/(k+2))^d per step once r < 1, so
        // sum_{j>k} t_j <= t_{k+1}/(1-r).
        const double r = x * std::pow(1.0 + 1.0 / static_cast<double>(k + 2), d);
        if (r < 1.0) {
            const double t_next =
                s * std::pow(static_cast<double>(k + 2), d) * xk * x;
            if (t_next / (1.0 - r) < tol) return acc;
        }
        xk *= x;
        if (xk == 0.0) return acc; // underflow: the tail is exactly 0
    }
}

} // namespace permean::series
