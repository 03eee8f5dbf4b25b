#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>

namespace permean {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Conversion from double is exact (doubles are dyadic rationals).
inline BigRational exact_rational(double x) { return BigRational(x); }

// Complex number with exact rational parts; just enough arithmetic for
// the enumeration oracle.
struct RationalComplex {
    BigRational re{0};
    BigRational im{0};

    RationalComplex() = default;
    RationalComplex(BigRational r, BigRational i) : re(std::move(r)), im(std::move(i)) {}
    explicit RationalComplex(const std::complex<double>& z)
        : re(exact_rational(z.real())), im(exact_rational(z.imag())) {}

    RationalComplex& operator+=(const RationalComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }

    RationalComplex operator*(const RationalComplex& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }

    RationalComplex operator*(const BigRational& s) const {
        return {re * s, im * s};
    }

    bool operator==(const RationalComplex& o) const = default;

    std::complex<double> to_complex() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
};

} // namespace permean
