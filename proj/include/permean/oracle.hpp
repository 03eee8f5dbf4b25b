#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "permean/ewens.hpp"
#include "permean/rational.hpp"
#include "permean/rng.hpp"

namespace permean::oracle {

using ewens::Complex;
using ewens::MultiplicativeSpec;

// A partition of n as cycle-length multiplicities: mult[j-1] = number
// of j-cycles, sum j*mult[j-1] = n.
struct CycleType {
    int n = 0;
    std::vector<int> mult;

    int cycle_count() const;
};

// Every partition of n exactly once, largest-part-first (descending
// lexicographic by part lists). Replayable; n above 60 is rejected
// (p(60) ~ 9.7e5 is the practical desk bound).
class PartitionStream {
public:
    explicit PartitionStream(int n);

    void for_each(const std::function<void(const CycleType&)>& fn) const;
    std::vector<CycleType> to_vector() const;
    std::size_t count() const;
    int n() const { return n_; }

private:
    int n_;
};

inline PartitionStream partitions(int n) { return PartitionStream(n); }

// nu_{n,theta} of the cycle type: (n!/theta_(n)) prod_j (theta/j)^{s_j}/s_j!.
double ewens_weight(const CycleType& t, double theta);
BigRational ewens_weight_exact(const CycleType& t, const BigRational& theta);

// M_n(f) by direct enumeration over cycle types (the definition route;
// mean_value is verified against this). brute_mean parallelizes over
// types with an order-fixed reduction; brute_mean_serial is the
// reference. The exact route converts fhat entries to rationals
// exactly.
Complex brute_mean(const MultiplicativeSpec& spec, double theta);
Complex brute_mean_serial(const MultiplicativeSpec& spec, double theta);
RationalComplex brute_mean_exact(const MultiplicativeSpec& spec, const BigRational& theta);

// One Chinese-restaurant-process draw from nu_{n,theta}: element i
// starts a new cycle with probability theta/(theta+i-1), otherwise
// attaches at one of the i-1 occupied slots chosen uniformly.
// Deterministic given seed (engine contract in rng.hpp; stream 0).
CycleType crp_sample(int n, double theta, std::uint64_t seed);
CycleType crp_sample_with(int n, double theta, rng::Engine& eng);

struct McResult {
    Complex estimate;
    double stderr_ = 0;
    long samples = 0;
};

// Monte-Carlo mean of prod_j fhat(j)^{s_j} over CRP draws. Samples are
// split into fixed 4096-sample chunks, chunk c on rng stream c+1;
// chunk partials are reduced in index order, so the result is bitwise
// independent of thread count and identical to mc_mean_serial.
McResult mc_mean(const MultiplicativeSpec& spec, double theta, long samples,
                 std::uint64_t seed);
McResult mc_mean_serial(const MultiplicativeSpec& spec, double theta, long samples,
                        std::uint64_t seed);

} // namespace permean::oracle
