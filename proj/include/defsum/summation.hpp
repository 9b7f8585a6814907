#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace defsum {

// Kahan–Babuška–Neumaier compensated accumulator. The running compensation
// keeps long window sums accurate even when the entries alternate in sign.
template <class S>
class CompensatedSum;

template <>
class CompensatedSum<double> {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

    // Difference of two accumulator states taken along the same prefix pass.
    // For lo == default state this reproduces hi.value() bit for bit.
    static double between(const CompensatedSum& hi, const CompensatedSum& lo) {
        return (hi.sum_ - lo.sum_) + (hi.comp_ - lo.comp_);
    }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

template <>
class CompensatedSum<std::complex<double>> {
public:
    void add(std::complex<double> v) {
        re_.add(v.real());
        im_.add(v.imag());
    }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

    static std::complex<double> between(const CompensatedSum& hi, const CompensatedSum& lo) {
        return {CompensatedSum<double>::between(hi.re_, lo.re_),
                CompensatedSum<double>::between(hi.im_, lo.im_)};
    }

private:
    CompensatedSum<double> re_;
    CompensatedSum<double> im_;
};

// splitmix64: cheap stateless generator used for random-access test sequences.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform double in [-1, 1] from a (seed, index) pair.
inline double unit_noise(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t h = splitmix64(seed * 0x9e3779b97f4a7c15ULL + index);
    return static_cast<double>(h >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

} // namespace defsum
