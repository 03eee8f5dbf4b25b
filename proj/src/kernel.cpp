#include "permean/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "permean/errors.hpp"
#include "permean/theta_binom.hpp"

namespace permean::kernel {

using theta_binom::build_weights;
using theta_binom::coeff_plus;

namespace {

void require_theta(double theta) {
    if (!(theta > 0.0)) throw validation_error("theta must be positive");
}

} // namespace

double c_by_convolution(double theta, int m, int j) {
    require_theta(theta);
    if (m < 0 || j < 1) throw validation_error("c_{m,j} requires m >= 0, j >= 1");
    const auto w = build_weights(theta, m);
    // the alternating a_s^- terms cancel several digits at large m/j;
    // extended accumulation keeps the route good to ~1e-14 of the result
    long double acc = 0.0L;
    for (int s = 0; s <= m; ++s)
        acc += static_cast<long double>(w.plus[m - s]) * w.minus[s] /
               static_cast<long double>(s + j);
    return static_cast<double>(acc);
}

std::vector<double> c_by_recurrence(double theta, int M, int j) {
    require_theta(theta);
    if (M < 0 || j < 1) throw validation_error("c_{m,j} requires M >= 0, j >= 1");
    std::vector<double> c(static_cast<std::size_t>(M) + 1);
    c[0] = 1.0 / j;
    double prefix = c[0]; // sum_{s<m} c_{s,j}
    for (int m = 1; m <= M; ++m) {
        c[m] = theta / static_cast<double>(m + j) * prefix;
        prefix += c[m];
    }
    return c;
}

KernelTable build_table(double theta, int M, int J) {
    require_theta(theta);
    if (M < 0 || J < 1) throw validation_error("kernel table requires M >= 0, J >= 1");
    KernelTable t;
    t.theta = theta;
    t.M = M;
    t.J = J;
    t.values.resize(static_cast<std::size_t>(M + 1) * J);
#pragma omp parallel for schedule(static)
    for (int j = 1; j <= J; ++j) {
        const auto col = c_by_recurrence(theta, M, j);
        for (int m = 0; m <= M; ++m)
            t.values[static_cast<std::size_t>(m) * J + (j - 1)] = col[m];
    }
    return t;
}

KernelTable build_table_serial(double theta, int M, int J) {
    require_theta(theta);
    if (M < 0 || J < 1) throw validation_error("kernel table requires M >= 0, J >= 1");
    KernelTable t;
    t.theta = theta;
    t.M = M;
    t.J = J;
    t.values.resize(static_cast<std::size_t>(M + 1) * J);
    for (int j = 1; j <= J; ++j) {
        const auto col = c_by_recurrence(theta, M, j);
        for (int m = 0; m <= M; ++m)
            t.values[static_cast<std::size_t>(m) * J + (j - 1)] = col[m];
    }
    return t;
}

double b_majorant(double theta, int m, int j) {
    require_theta(theta);
    if (m < 1 || j < 1) throw validation_error("b_{m,j} requires m >= 1, j >= 1");
    return theta / (static_cast<double>(j) * j) *
           std::pow(1.0 + theta / j, static_cast<double>(m - 1));
}

double beta_integral(int j, double theta) {
    require_theta(theta);
    if (j < 1) throw validation_error("beta_integral requires j >= 1");
    double b = 1.0 / (theta + 1.0);
    for (int i = 1; i < j; ++i) b *= i / (i + theta + 1.0);
    return b;
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double fa,
                   double b, double fb, double m, double fm, double whole,
                   double eps, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    if (depth <= 0)
        throw cross_check_error("adaptive quadrature did not converge");
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
    if (!(abs_tol > 0.0)) throw validation_error("integrate requires abs_tol > 0");
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, fa, b, fb, m, fm, whole, abs_tol, 60);
}

Lemma2Report check_lemma2(double theta, int M, int J) {
    require_theta(theta);
    const auto table = build_table(theta, M, J);
    const auto w = build_weights(theta, M);

    Lemma2Report rep;
    rep.theta = theta;
    rep.M = M;
    rep.J = J;
    rep.noise_floor = 1e-13;
    constexpr double slack = 1e-12;

    // estimate (i): 0 <= c <= b <= (theta/j^2) e^{theta m/j}, m >= 1;
    // c_{0,j} = 1/j separately
    for (int j = 1; j <= J; ++j) {
        if (std::abs(table.at(0, j) - 1.0 / j) > slack / j)
            throw invariant_violation("c_{0,j} != 1/j at j = " + std::to_string(j));
        for (int m = 1; m <= M; ++m) {
            const double c = table.at(m, j);
            const double b = b_majorant(theta, m, j);
            const double e = theta / (static_cast<double>(j) * j) *
                             std::exp(theta * m / static_cast<double>(j));
            ++rep.cells_checked;
            if (c < -slack || c > b * (1.0 + slack) || b > e * (1.0 + slack))
                throw invariant_violation(
                    "estimate (i) chain violated at m=" + std::to_string(m) +
                    " j=" + std::to_string(j));
            const double excess =
                std::max({-c, b > 0 ? c / b - 1.0 : 0.0, e > 0 ? b / e - 1.0 : 0.0});
            rep.worst_chain_slack = std::max(rep.worst_chain_slack, excess);
        }
    }

    // recurrence vs convolution, full grid
    std::vector<double> col_err(static_cast<std::size_t>(J) + 1, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int j = 1; j <= J; ++j) {
        double worst = 0.0;
        for (int m = 0; m <= M; ++m) {
            const double rec = table.at(m, j);
            long double conv = 0.0L;
            for (int s = 0; s <= m; ++s)
                conv += static_cast<long double>(w.plus[m - s]) * w.minus[s] /
                        static_cast<long double>(s + j);
            worst = std::max(worst, std::abs(static_cast<double>(conv) - rec) /
                                        std::max(std::abs(rec), 1e-300));
        }
        col_err[j] = worst;
    }
    rep.max_route_error = *std::max_element(col_err.begin(), col_err.end());

    // estimate (ii): normalized error over the full grid m >= 2, cells on
    // the dyadic subgrid reported individually for the stability verdict
    const auto normalized = [&](int m, int j, double beta) {
        const double approx = w.plus[m] * beta;
        const double err = std::abs(table.at(m, j) - approx);
        return err / (std::pow(m, theta - 2.0) * std::pow(j, -theta) +
                      1.0 / (static_cast<double>(m) * m));
    };
    for (int j = 1; j <= J; ++j) {
        const double beta = beta_integral(j, theta);
        for (int m = 2; m <= M; ++m)
            rep.max_normalized_error =
                std::max(rep.max_normalized_error, normalized(m, j, beta));
    }
    for (int j : {10, 20, 40}) {
        if (j > J) continue;
        const double beta = beta_integral(j, theta);
        for (int m : {50, 100, 200}) {
            if (m > M) continue;
            const double approx = w.plus[m] * beta;
            const double err = std::abs(table.at(m, j) - approx);
            Lemma2Cell cell;
            cell.j = j;
            cell.m = m;
            cell.normalized_error = normalized(m, j, beta);
            cell.below_noise_floor = err <= rep.noise_floor * std::max(1.0, approx);
            rep.dyadic.push_back(cell);
        }
    }
    return rep;
}

TailIdentity tail_identity(double theta, int j, int n) {
    require_theta(theta);
    if (j < 1 || n < 1) throw validation_error("tail_identity requires j >= 1, n >= 1");

    TailIdentity r;
    const double x = std::exp(-1.0 / n);

    // sum_{s>=0} a_s^- x^{j+s}/(j+s), terms cut at 1e-16 of the accumulation
    double minus_s = 1.0;
    double xp = std::pow(x, j);
    double acc = 0.0;
    const long cap = 200L * n + 2000;
    for (long s = 0;; ++s) {
        const double term = minus_s * xp / static_cast<double>(j + s);
        acc += term;
        if (s >= 2 && std::abs(term) <= 1e-16 * std::abs(acc)) break;
        if (s > cap)
            throw cross_check_error("tail_identity: series did not settle");
        minus_s *= (static_cast<double>(s) - theta) / (s + 1);
        xp *= x;
    }
    r.sum = acc;

    // the integrand decays below 1e-26 of its peak by 1/n + 60/j; the
    // analytic remainder e^{-j*upper}/j is below that too
    const double lo = 1.0 / n;
    const double hi = lo + 60.0 / j;
    r.integral = integrate(
        [theta, j](double y) {
            return std::pow(1.0 - std::exp(-y), theta) * std::exp(-static_cast<double>(j) * y);
        },
        lo, hi, 1e-13);

    r.bound = std::exp(-static_cast<double>(j) / n) /
              (static_cast<double>(j) * std::pow(static_cast<double>(n), theta));

    if (std::abs(r.sum - r.integral) > 1e-10 * (1.0 + std::abs(r.sum)))
        throw cross_check_error("tail_identity: sum and integral routes disagree");
    return r;
}

} // namespace permean::kernel
