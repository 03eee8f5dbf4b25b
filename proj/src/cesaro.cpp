#include "permean/cesaro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "permean/errors.hpp"

namespace permean::cesaro {

using theta_binom::build_weights;

Complex SummabilityInput::abel_value(double x, double tol) const {
    if (closed_form) return closed_form(x);
    return series::eval_tail(coeffs, x, tol);
}

SummabilityInput SummabilityInput::from_series(const TruncatedSeries& s, std::string label) {
    SummabilityInput in;
    in.coeffs = CoeffStream::from_series(s);
    in.label = std::move(label);
    return in;
}

SummabilityInput SummabilityInput::alternating_unit() {
    SummabilityInput in;
    in.coeffs.at = [](std::size_t k) -> Complex { return k % 2 == 0 ? 1.0 : -1.0; };
    in.coeffs.envelope = {1.0, 0.0};
    in.label = "alternating";
    return in;
}

SummabilityInput SummabilityInput::alternating_linear() {
    SummabilityInput in;
    in.coeffs.at = [](std::size_t k) -> Complex {
        const double v = static_cast<double>(k);
        return k % 2 == 0 ? v : -v;
    };
    in.coeffs.envelope = {1.0, 1.0};
    in.label = "alternating-linear";
    return in;
}

SummabilityInput SummabilityInput::delta() {
    SummabilityInput in;
    in.coeffs.at = [](std::size_t k) -> Complex { return k == 0 ? 1.0 : 0.0; };
    in.coeffs.envelope = {1.0, 0.0};
    in.coeffs.finite_order = 0;
    in.label = "delta";
    return in;
}

SummabilityInput SummabilityInput::exp_poly(const TruncatedSeries& l_poly, double theta,
                                            int order, std::string label) {
    if (l_poly.coeffs.empty() || l_poly.coeffs[0] != 0.0)
        throw validation_error("exp_poly requires a polynomial with zero constant term");
    TruncatedSeries g = TruncatedSeries::zero(order);
    for (int j = 1; j <= std::min(order, l_poly.order()); ++j)
        g.coeffs[j] = theta * l_poly.coeffs[j];
    auto f = series::exp_series(g);

    SummabilityInput in = from_series(f, std::move(label));
    // f is entire, so the precomputed truncation is not the whole series;
    // bound the coefficients by those of exp(s*theta*sum z^j/j) instead.
    double s = 0.0;
    for (int j = 1; j <= l_poly.order(); ++j)
        s = std::max(s, std::abs(l_poly.coeffs[j]) * j);
    const double d = std::max(0.0, s * theta - 1.0);
    in.coeffs.envelope = {std::exp(d), d};
    in.coeffs.finite_order.reset();

    // Abel values exactly: Horner on the polynomial, then scalar exp.
    const auto lc = l_poly.coeffs;
    in.closed_form = [lc, theta](double x) -> Complex {
        Complex acc = 0.0;
        for (auto it = lc.rbegin(); it != lc.rend(); ++it) acc = acc * x + *it;
        return std::exp(theta * acc);
    };
    return in;
}

Complex cesaro_mean(const SummabilityInput& a, double p, int n) {
    if (!(p > -1.0)) throw validation_error("Cesaro parameter requires p > -1");
    if (n < 0) throw validation_error("cesaro_mean requires n >= 0");
    const auto w = build_weights(p + 1.0, n);
    Complex acc = 0.0;
    for (int k = 0; k <= n; ++k) acc += a.coeff(k) * w.plus[n - k];
    return acc / w.plus[n];
}

namespace {

struct CachedCoeffs {
    std::vector<Complex> ka; // k * a_k
    int last_nonzero = 0;
    bool all_real = true;
};

CachedCoeffs cache_ka(const SummabilityInput& a, int J) {
    CachedCoeffs c;
    c.ka.resize(static_cast<std::size_t>(J) + 1);
    for (int k = 0; k <= J; ++k) {
        const Complex v = static_cast<double>(k) * a.coeff(k);
        c.ka[k] = v;
        if (v != 0.0) c.last_nonzero = k;
        if (v.imag() != 0.0) c.all_real = false;
    }
    return c;
}

} // namespace

Complex s_theta(const SummabilityInput& a, double theta, int n) {
    if (n < 1) throw validation_error("s_theta requires n >= 1");
    const auto w = build_weights(theta, n);
    Complex acc = 0.0;
    for (int k = 1; k <= n; ++k)
        acc += static_cast<double>(k) * a.coeff(k) * w.plus[n - k];
    return acc;
}

std::vector<Complex> s_theta_prefix(const SummabilityInput& a, double theta, int J) {
    const auto w = build_weights(theta, J);
    const auto c = cache_ka(a, J);
    std::vector<Complex> out(static_cast<std::size_t>(J) + 1, Complex(0.0));
    if (c.all_real) {
        // real fast path; bitwise-identical to the complex path on real input
        std::vector<double> ka(c.ka.size());
        for (std::size_t k = 0; k < ka.size(); ++k) ka[k] = c.ka[k].real();
#pragma omp parallel for schedule(static)
        for (int j = 1; j <= J; ++j) {
            double acc = 0.0;
            const int hi = std::min(j, c.last_nonzero);
            for (int k = 1; k <= hi; ++k) acc += ka[k] * w.plus[j - k];
            out[j] = acc;
        }
    } else {
#pragma omp parallel for schedule(static)
        for (int j = 1; j <= J; ++j) {
            Complex acc = 0.0;
            const int hi = std::min(j, c.last_nonzero);
            for (int k = 1; k <= hi; ++k) acc += c.ka[k] * w.plus[j - k];
            out[j] = acc;
        }
    }
    return out;
}

std::vector<Complex> s_theta_prefix_serial(const SummabilityInput& a, double theta, int J) {
    const auto w = build_weights(theta, J);
    const auto c = cache_ka(a, J);
    std::vector<Complex> out(static_cast<std::size_t>(J) + 1, Complex(0.0));
    for (int j = 1; j <= J; ++j) {
        Complex acc = 0.0;
        const int hi = std::min(j, c.last_nonzero);
        for (int k = 1; k <= hi; ++k) acc += c.ka[k] * w.plus[j - k];
        out[j] = acc;
    }
    return out;
}

Thm1Report thm1_residual(const SummabilityInput& a, double theta, int n,
                         double j_cap_factor) {
    if (n < 1) throw validation_error("thm1_residual requires n >= 1");
    if (!(j_cap_factor >= 10.0))
        throw validation_error("thm1_residual requires j_cap_factor >= 10");
    theta_binom::build_weights(theta, 0); // validate theta

    Thm1Report r;
    r.n = n;
    r.theta = theta;
    r.j_cap = static_cast<long>(std::ceil(j_cap_factor * n));
    const int J = static_cast<int>(r.j_cap);

    const auto S = s_theta_prefix(a, theta, J);
    const auto w = build_weights(theta, n);

    Complex ces = 0.0;
    for (int k = 0; k <= n; ++k) ces += a.coeff(k) * w.plus[n - k];
    r.cesaro = ces / w.plus[n];
    r.abel = a.abel_value(std::exp(-1.0 / n));
    r.drift = S[n] / (n * w.plus[n]);
    r.lhs = std::abs(r.cesaro - r.abel - r.drift);

    const double n_theta = std::pow(static_cast<double>(n), theta);
    double sum1 = 0.0, sum2 = 0.0, t1 = 0.0, t2 = 0.0;
    for (int j = 1; j <= J; ++j) {
        const double sj = std::abs(S[j]);
        const double decay = std::exp(-static_cast<double>(j) / n);
        t1 = sj * std::pow(static_cast<double>(j), -theta) * decay / n;
        sum1 += t1;
        if (j >= n) {
            t2 = sj / j * decay / n_theta;
            sum2 += t2;
        }
    }
    r.majorant = sum1 + sum2;
    r.witness = r.majorant > 0.0 ? (t1 + t2) / r.majorant : 0.0;
    if (r.witness > 1e-12)
        throw cross_check_error(
            "thm1_residual: majorant truncation tail is not negligible "
            "(witness " + std::to_string(r.witness) + "); raise j_cap_factor");
    r.ratio = r.majorant > 0.0 ? r.lhs / r.majorant
                               : std::numeric_limits<double>::quiet_NaN();
    return r;
}

TauberReport tauber_conditions(const SummabilityInput& a, double p, long N,
                               double cauchy_tol) {
    if (!(p > -1.0)) throw validation_error("tauber_conditions requires p > -1");
    if (N < 1) throw validation_error("tauber_conditions requires N >= 1");

    TauberReport rep;
    rep.p = p;
    // geometric grid: halve down from N, smallest point >= min(N, 50)
    for (long n = N; n >= std::min<long>(N, 50); n /= 2) rep.grid.push_back(n);
    std::reverse(rep.grid.begin(), rep.grid.end());

    const double theta = p + 1.0;
    for (long n : rep.grid) {
        const double x = std::exp(-1.0 / static_cast<double>(n));
        rep.abel.push_back(a.abel_value(x, 1e-9));
        rep.cesaro.push_back(cesaro_mean(a, p, static_cast<int>(n)));
        const Complex s = s_theta(a, theta, static_cast<int>(n));
        rep.second.push_back(std::abs(s) / std::pow(static_cast<double>(n), theta));
    }

    const auto cauchy = [&](const std::vector<Complex>& v) {
        const std::size_t m = v.size();
        if (m < 3) return false;
        return std::abs(v[m - 1] - v[m - 2]) <= cauchy_tol &&
               std::abs(v[m - 1] - v[m - 3]) <= cauchy_tol;
    };
    rep.abel_converged = cauchy(rep.abel);
    rep.cesaro_converged = cauchy(rep.cesaro);
    rep.second_vanishes = !rep.second.empty() && rep.second.back() <= cauchy_tol;
    rep.summable = rep.abel_converged && rep.second_vanishes;
    if (rep.summable) {
        rep.limit = rep.abel.back();
        rep.verdict = "summable";
    } else {
        rep.verdict = "not summable";
    }
    return rep;
}

double inversion_check(const SummabilityInput& a, double theta, int N) {
    if (N < 1) throw validation_error("inversion_check requires N >= 1");
    const auto w = build_weights(theta, N);

    // S values grow like n^{1+theta}, so the n a_n they reproduce sits many
    // digits below them; extended precision keeps the check's own roundoff
    // out of the verdict.
    using LComplex = std::complex<long double>;
    std::vector<LComplex> ka(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k)
        ka[k] = static_cast<long double>(k) * LComplex(a.coeff(k));
    std::vector<LComplex> S(static_cast<std::size_t>(N) + 1, LComplex(0.0L));
#pragma omp parallel for schedule(static)
    for (int j = 1; j <= N; ++j) {
        LComplex acc = 0.0L;
        for (int k = 1; k <= j; ++k)
            acc += ka[k] * static_cast<long double>(w.plus[j - k]);
        S[j] = acc;
    }

    std::vector<double> err(static_cast<std::size_t>(N) + 1, 0.0);
#pragma omp parallel for schedule(static)
    for (int n = 1; n <= N; ++n) {
        LComplex rhs = 0.0L;
        for (int k = 1; k <= n; ++k)
            rhs += S[k] * static_cast<long double>(w.minus[n - k]);
        err[n] = static_cast<double>(std::abs(ka[n] - rhs));
    }
    return *std::max_element(err.begin(), err.end());
}

} // namespace permean::cesaro
