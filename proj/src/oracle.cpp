#include "permean/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "permean/errors.hpp"

namespace permean::oracle {

namespace {

constexpr int kPartitionBound = 60; // p(60) ~ 9.7e5

// Partitions of `rem` with parts <= `max_part`, largest part first.
// `mult` carries the multiplicities chosen so far.
template <typename Fn>
void descend(int n, int rem, int max_part, std::vector<int>& mult, Fn&& emit) {
    if (rem == 0) {
        emit(mult);
        return;
    }
    for (int part = std::min(rem, max_part); part >= 1; --part) {
        ++mult[part - 1];
        descend(n, rem - part, part, mult, emit);
        --mult[part - 1];
    }
}

Complex f_product(const MultiplicativeSpec& spec, const std::vector<int>& mult) {
    Complex prod = 1.0;
    for (int j = 1; j <= spec.n; ++j)
        for (int s = 0; s < mult[j - 1]; ++s) prod *= spec.fhat[j - 1];
    return prod;
}

// Enumeration split by largest part: block p holds the partitions whose
// largest part is exactly p. Blocks are independent, so they can run on
// separate threads; partials are combined in descending p, the same
// order the serial stream uses.
Complex brute_mean_blocked(const MultiplicativeSpec& spec, double theta, bool parallel) {
    const int n = spec.n;
    std::vector<Complex> block(static_cast<std::size_t>(n) + 1, Complex(0.0));
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int p = n; p >= 1; --p) {
        std::vector<int> mult(static_cast<std::size_t>(n), 0);
        ++mult[p - 1];
        Complex acc = 0.0;
        descend(n, n - p, p, mult, [&](const std::vector<int>& m) {
            CycleType t{n, m};
            acc += ewens_weight(t, theta) * f_product(spec, m);
        });
        block[p] = acc;
    }
    Complex total = 0.0;
    for (int p = n; p >= 1; --p) total += block[p];
    return total;
}

} // namespace

int CycleType::cycle_count() const {
    return std::accumulate(mult.begin(), mult.end(), 0);
}

PartitionStream::PartitionStream(int n) : n_(n) {
    if (n < 1) throw validation_error("partitions require n >= 1");
    if (n > kPartitionBound)
        throw validation_error("partition enumeration capped at n = " +
                               std::to_string(kPartitionBound));
}

void PartitionStream::for_each(const std::function<void(const CycleType&)>& fn) const {
    std::vector<int> mult(static_cast<std::size_t>(n_), 0);
    descend(n_, n_, n_, mult, [&](const std::vector<int>& m) {
        fn(CycleType{n_, m});
    });
}

std::vector<CycleType> PartitionStream::to_vector() const {
    std::vector<CycleType> out;
    for_each([&](const CycleType& t) { out.push_back(t); });
    return out;
}

std::size_t PartitionStream::count() const {
    std::size_t c = 0;
    for_each([&](const CycleType&) { ++c; });
    return c;
}

namespace {

void require_valid(const CycleType& t) {
    if (t.n < 1 || static_cast<int>(t.mult.size()) != t.n)
        throw validation_error("cycle type has wrong multiplicity length");
    long total = 0;
    for (int j = 1; j <= t.n; ++j) {
        if (t.mult[j - 1] < 0) throw validation_error("negative multiplicity");
        total += static_cast<long>(j) * t.mult[j - 1];
    }
    if (total != t.n)
        throw validation_error("multiplicities do not partition n");
}

} // namespace

double ewens_weight(const CycleType& t, double theta) {
    if (!(theta > 0.0)) throw validation_error("theta must be positive");
    require_valid(t);
    // n!/theta_(n) as a stable product of ratios
    double w = 1.0;
    for (int k = 1; k <= t.n; ++k) w *= k / (theta + k - 1);
    for (int j = 1; j <= t.n; ++j) {
        const int s = t.mult[j - 1];
        for (int i = 1; i <= s; ++i) w *= theta / (static_cast<double>(j) * i);
    }
    return w;
}

BigRational ewens_weight_exact(const CycleType& t, const BigRational& theta) {
    if (!(theta > 0)) throw validation_error("theta must be positive");
    require_valid(t);
    BigRational w = 1;
    for (int k = 1; k <= t.n; ++k) w *= BigRational(k) / (theta + (k - 1));
    for (int j = 1; j <= t.n; ++j) {
        const int s = t.mult[j - 1];
        for (int i = 1; i <= s; ++i) w *= theta / (BigRational(j) * i);
    }
    return w;
}

Complex brute_mean(const MultiplicativeSpec& spec, double theta) {
    PartitionStream check(spec.n); // enforces the desk-scale bound
    return brute_mean_blocked(spec, theta, true);
}

Complex brute_mean_serial(const MultiplicativeSpec& spec, double theta) {
    PartitionStream check(spec.n);
    return brute_mean_blocked(spec, theta, false);
}

RationalComplex brute_mean_exact(const MultiplicativeSpec& spec, const BigRational& theta) {
    std::vector<RationalComplex> fhat;
    fhat.reserve(spec.fhat.size());
    for (const auto& f : spec.fhat) fhat.emplace_back(f);

    RationalComplex total;
    partitions(spec.n).for_each([&](const CycleType& t) {
        RationalComplex prod(BigRational(1), BigRational(0));
        for (int j = 1; j <= spec.n; ++j)
            for (int s = 0; s < t.mult[j - 1]; ++s) prod = prod * fhat[j - 1];
        total += prod * ewens_weight_exact(t, theta);
    });
    return total;
}

CycleType crp_sample_with(int n, double theta, rng::Engine& eng) {
    if (n < 1) throw validation_error("crp_sample requires n >= 1");
    if (!(theta > 0.0)) throw validation_error("theta must be positive");
    std::vector<int> cycle_of(static_cast<std::size_t>(n));
    std::vector<int> sizes;
    sizes.reserve(16);
    for (int i = 1; i <= n; ++i) {
        if (eng.u01() < theta / (theta + i - 1)) {
            cycle_of[i - 1] = static_cast<int>(sizes.size());
            sizes.push_back(1);
        } else {
            const auto slot = static_cast<int>(eng.below(static_cast<std::uint64_t>(i - 1)));
            cycle_of[i - 1] = cycle_of[slot];
            ++sizes[cycle_of[slot]];
        }
    }
    CycleType t{n, std::vector<int>(static_cast<std::size_t>(n), 0)};
    for (int len : sizes) ++t.mult[len - 1];
    return t;
}

CycleType crp_sample(int n, double theta, std::uint64_t seed) {
    rng::Engine eng(rng::derive_stream_seed(seed, 0));
    return crp_sample_with(n, theta, eng);
}

namespace {

constexpr long kChunk = 4096;

struct ChunkSums {
    Complex sum{0.0};
    double abs2 = 0.0;
};

ChunkSums run_chunk(const MultiplicativeSpec& spec, double theta,
                    std::uint64_t stream_seed, long count) {
    rng::Engine eng(stream_seed);
    ChunkSums out;
    for (long s = 0; s < count; ++s) {
        const CycleType t = crp_sample_with(spec.n, theta, eng);
        Complex prod = 1.0;
        for (int j = 1; j <= spec.n; ++j)
            for (int i = 0; i < t.mult[j - 1]; ++i) prod *= spec.fhat[j - 1];
        out.sum += prod;
        out.abs2 += std::norm(prod);
    }
    return out;
}

McResult mc_reduce(const MultiplicativeSpec& spec, double theta, long samples,
                   std::uint64_t seed, bool parallel) {
    if (samples < 100) throw validation_error("mc_mean requires samples >= 100");
    const long chunks = (samples + kChunk - 1) / kChunk;
    std::vector<ChunkSums> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long c = 0; c < chunks; ++c) {
        const long count = std::min(kChunk, samples - c * kChunk);
        partial[c] = run_chunk(spec, theta, rng::derive_stream_seed(seed, c + 1), count);
    }
    Complex sum = 0.0;
    double abs2 = 0.0;
    for (const auto& ps : partial) {
        sum += ps.sum;
        abs2 += ps.abs2;
    }
    McResult r;
    r.samples = samples;
    r.estimate = sum / static_cast<double>(samples);
    const double var =
        std::max(0.0, (abs2 - std::norm(sum) / samples) / (samples - 1));
    r.stderr_ = std::sqrt(var / samples);
    return r;
}

} // namespace

McResult mc_mean(const MultiplicativeSpec& spec, double theta, long samples,
                 std::uint64_t seed) {
    return mc_reduce(spec, theta, samples, seed, true);
}

McResult mc_mean_serial(const MultiplicativeSpec& spec, double theta, long samples,
                        std::uint64_t seed) {
    return mc_reduce(spec, theta, samples, seed, false);
}

} // namespace permean::oracle
