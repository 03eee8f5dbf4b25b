#include "permean/ewens.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "permean/errors.hpp"
#include "permean/rng.hpp"

namespace permean::ewens {

MultiplicativeSpec::MultiplicativeSpec(int n_, std::vector<Complex> fhat_)
    : n(n_), fhat(std::move(fhat_)) {
    if (n < 1) throw validation_error("spec requires n >= 1");
    if (static_cast<int>(fhat.size()) != n)
        throw validation_error("fhat must have length n = " + std::to_string(n) +
                               ", got " + std::to_string(fhat.size()));
}

MultiplicativeSpec MultiplicativeSpec::constant(int n, Complex u) {
    return {n, std::vector<Complex>(static_cast<std::size_t>(n), u)};
}

MultiplicativeSpec MultiplicativeSpec::unimodular(int n, double tau) {
    return constant(n, std::polar(1.0, tau));
}

MultiplicativeSpec MultiplicativeSpec::zero_on(int n, const std::vector<int>& lengths) {
    std::vector<Complex> f(static_cast<std::size_t>(n), 1.0);
    for (int j : lengths) {
        if (j < 1) throw validation_error("zero_on lengths must be >= 1");
        if (j <= n) f[j - 1] = 0.0;
    }
    return {n, std::move(f)};
}

MultiplicativeSpec MultiplicativeSpec::random_disk(int n, std::uint64_t seed) {
    rng::Engine eng(rng::derive_stream_seed(seed, 0));
    std::vector<Complex> f;
    f.reserve(n);
    for (int j = 0; j < n; ++j) {
        // uniform on the closed unit disk
        const double r = std::sqrt(eng.u01());
        const double phi = 2.0 * M_PI * eng.u01();
        f.emplace_back(std::polar(r, phi));
    }
    return {n, std::move(f)};
}

bool MultiplicativeSpec::in_unit_disk(double slack) const {
    return std::all_of(fhat.begin(), fhat.end(),
                       [=](const Complex& z) { return std::abs(z) <= 1.0 + slack; });
}

TruncatedSeries l_series(const MultiplicativeSpec& spec, int order) {
    if (order < spec.n)
        throw validation_error("l_series order must be >= n");
    TruncatedSeries l = TruncatedSeries::zero(order);
    for (int j = 1; j <= spec.n; ++j)
        l.coeffs[j] = (spec.fhat[j - 1] - 1.0) / static_cast<double>(j);
    return l;
}

TruncatedSeries big_n_coeffs(const MultiplicativeSpec& spec, double theta, int N) {
    if (N < spec.n) throw validation_error("big_n_coeffs requires N >= n");
    const auto w = theta_binom::build_weights(theta, N);

    // route (a): exp(theta L_n) * (1-z)^{-theta}
    const auto m = series::exp_series(series::scale(l_series(spec, N), theta));
    auto a = series::mul(m, TruncatedSeries::from_weights_plus(w));

    // route (b): exp of theta sum fhat(j) z^j / j, with fhat(j) = 1 beyond n
    TruncatedSeries g = TruncatedSeries::zero(N);
    for (int j = 1; j <= N; ++j) {
        const Complex fj = j <= spec.n ? spec.fhat[j - 1] : Complex(1.0);
        g.coeffs[j] = theta * fj / static_cast<double>(j);
    }
    const auto b = series::exp_series(g);

    for (int k = 0; k <= N; ++k) {
        const double diff = std::abs(a.coeffs[k] - b.coeffs[k]);
        if (diff > 1e-9 * (1.0 + std::abs(a.coeffs[k])))
            throw cross_check_error(
                "big_n_coeffs: product and direct-exp routes disagree at k = " +
                std::to_string(k) + " by " + std::to_string(diff));
    }
    return a;
}

Complex mean_value(const MultiplicativeSpec& spec, double theta) {
    const auto n_coeffs = big_n_coeffs(spec, theta, spec.n);
    return n_coeffs.coeffs[spec.n] / theta_binom::coeff_plus(theta, spec.n);
}

double mu_n(const MultiplicativeSpec& spec, double p) {
    if (!(p > 0.0)) throw validation_error("mu_n requires p > 0");
    double acc = 0.0;
    for (const auto& f : spec.fhat) acc += std::pow(std::abs(f - 1.0), p);
    return std::pow(acc / spec.n, 1.0 / p);
}

MeanReport thm3_residual(const MultiplicativeSpec& spec, double theta, double p) {
    if (!(p > std::max(1.0, 1.0 / theta)))
        throw validation_error("thm3 requires p > max(1, 1/theta)");
    if (!spec.in_unit_disk())
        throw validation_error("thm3 requires |fhat(j)| <= 1 for all j");

    MeanReport r;
    r.n = spec.n;
    r.theta = theta;
    r.p = p;
    r.weight = theta_binom::coeff_plus(theta, spec.n);
    const auto n_coeffs = big_n_coeffs(spec, theta, spec.n);
    r.n_coeff = n_coeffs.coeffs[spec.n];
    r.mean = r.n_coeff / r.weight;

    Complex l1 = 0.0; // L_n(1)
    for (int k = 1; k <= spec.n; ++k)
        l1 += (spec.fhat[k - 1] - 1.0) / static_cast<double>(k);
    r.asymptotic = std::exp(theta * l1);

    r.mu = mu_n(spec, p);
    r.residual = std::abs(r.mean - r.asymptotic);
    if (r.mu > 0.0)
        r.ratio = r.residual / r.mu;
    else
        r.ratio = r.residual > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return r;
}

} // namespace permean::ewens
