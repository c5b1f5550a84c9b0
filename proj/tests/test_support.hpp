#pragma once

// Shared helpers and independent oracles for the test suites. The oracles
// deliberately use different algorithms than the library code they check.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "tasselab/simulate.hpp"

namespace testsupport {

// Upper-tail binomial probabilities at p = 1/2 by exhaustive enumeration of
// all 2^n equiprobable outcome sequences. tail[k] = P(#heads >= k).
inline std::vector<double> binomial_tails_by_enumeration(int n) {
    std::vector<std::uint64_t> histogram(static_cast<std::size_t>(n) + 1, 0);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < total; ++mask)
        ++histogram[static_cast<std::size_t>(std::popcount(mask))];

    std::vector<double> tails(static_cast<std::size_t>(n) + 1, 0.0);
    std::uint64_t running = 0;
    for (int k = n; k >= 0; --k) {
        running += histogram[static_cast<std::size_t>(k)];
        tails[static_cast<std::size_t>(k)] =
            static_cast<double>(running) / static_cast<double>(total);
    }
    return tails;
}

namespace detail {

inline long double betacf(long double a, long double b, long double x) {
    constexpr int max_iterations = 300;
    constexpr long double eps = 1e-24L;
    constexpr long double fpmin = 1e-1000L;

    const long double qab = a + b;
    const long double qap = a + 1.0L;
    const long double qam = a - 1.0L;
    long double c = 1.0L;
    long double d = 1.0L - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0L / d;
    long double h = d;
    for (int m = 1; m <= max_iterations; ++m) {
        const int m2 = 2 * m;
        long double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0L + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0L + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0L / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0L + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0L + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0L / d;
        const long double del = d * c;
        h *= del;
        if (std::abs(del - 1.0L) <= eps) break;
    }
    return h;
}

inline long double betai(long double a, long double b, long double x) {
    if (x <= 0.0L) return 0.0L;
    if (x >= 1.0L) return 1.0L;
    const long double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                    a * std::log(x) + b * std::log(1.0L - x));
    if (x < (a + 1.0L) / (a + b + 2.0L)) return bt * betacf(a, b, x) / a;
    return 1.0L - bt * betacf(b, a, 1.0L - x) / b;
}

}  // namespace detail

// Independent route to P(X >= k), X ~ Binomial(n, p), via the regularized
// incomplete beta function I_p(k, n-k+1) evaluated by continued fraction.
inline double binomial_tail_by_incomplete_beta(std::int64_t n, std::int64_t k, double p) {
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    return static_cast<double>(detail::betai(static_cast<long double>(k),
                                             static_cast<long double>(n - k + 1),
                                             static_cast<long double>(p)));
}

// Recount tea pixels from raw cells, independent of the maintained counter.
inline std::size_t recount_tea(const tasselab::TeaImage& img) {
    std::size_t count = 0;
    for (const auto cell : img.cells()) count += cell != 0;
    return count;
}

inline tasselab::SimConfig small_config(int rounds = 500, int k_change = 3,
                                        std::uint64_t seed = 42, int width = 8, int height = 8,
                                        tasselab::SamplingMode mode =
                                            tasselab::SamplingMode::distinct) {
    tasselab::SimConfig cfg;
    cfg.width = width;
    cfg.height = height;
    cfg.k_change = k_change;
    cfg.mode = mode;
    cfg.rounds = rounds;
    cfg.seed = seed;
    cfg.base.seed = seed ^ 0x5eedbeefULL;
    return cfg;
}

}  // namespace testsupport
