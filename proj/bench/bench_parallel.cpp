// Serial-vs-OpenMP timings for the data-parallel kernels.

#include <chrono>
#include <cstdio>
#include <functional>

#include <omp.h>

#include "permean/cesaro.hpp"
#include "permean/ewens.hpp"
#include "permean/kernel.hpp"
#include "permean/oracle.hpp"
#include "permean/rng.hpp"
#include "permean/series.hpp"

using namespace permean;

namespace {

double time_ms(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.1f ms %10.1f ms %8.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

series::TruncatedSeries random_series(int order, std::uint64_t seed) {
    rng::Engine eng(seed);
    auto s = series::TruncatedSeries::zero(order);
    for (auto& c : s.coeffs) c = {2.0 * eng.u01() - 1.0, 2.0 * eng.u01() - 1.0};
    return s;
}

} // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    {
        const auto a = random_series(4000, 1);
        const auto b = random_series(4000, 2);
        series::TruncatedSeries out;
        const double s = time_ms([&] { out = series::mul_serial(a, b); });
        const double p = time_ms([&] { out = series::mul(a, b); });
        report("series mul, N=4000", s, p);
    }
    {
        const auto alt = cesaro::SummabilityInput::alternating_unit();
        std::vector<series::Complex> out;
        const double s = time_ms([&] { out = cesaro::s_theta_prefix_serial(alt, 1.0, 24000); });
        const double p = time_ms([&] { out = cesaro::s_theta_prefix(alt, 1.0, 24000); });
        report("S_theta prefix, J=24000", s, p);
    }
    {
        kernel::KernelTable t;
        const double s = time_ms([&] { t = kernel::build_table_serial(1.5, 2000, 512); });
        const double p = time_ms([&] { t = kernel::build_table(1.5, 2000, 512); });
        report("kernel table, 2000x512", s, p);
    }
    {
        const auto spec = ewens::MultiplicativeSpec::random_disk(40, 7);
        series::Complex out;
        const double s = time_ms([&] { out = oracle::brute_mean_serial(spec, 1.0); });
        const double p = time_ms([&] { out = oracle::brute_mean(spec, 1.0); });
        report("brute mean, n=40", s, p);
    }
    {
        const auto spec = ewens::MultiplicativeSpec::constant(50, 0.5);
        oracle::McResult out;
        const double s = time_ms([&] { out = oracle::mc_mean_serial(spec, 1.0, 200000, 3); });
        const double p = time_ms([&] { out = oracle::mc_mean(spec, 1.0, 200000, 3); });
        report("CRP Monte-Carlo, 2e5", s, p);
    }
    return 0;
}
