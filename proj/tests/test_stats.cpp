#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tasselab/stats.hpp"
#include "test_support.hpp"

using namespace tasselab;

TEST_CASE("binomial coefficient") {
    CHECK(binomial_coefficient(49, 6) == 13983816ULL);
    CHECK(binomial_coefficient(10, 0) == 1ULL);
    CHECK(binomial_coefficient(10, 10) == 1ULL);
    CHECK(binomial_coefficient(10, 11) == 0ULL);
    CHECK(binomial_coefficient(52, 26) == 495918532948104ULL);
}

TEST_CASE("binomial_tail basics") {
    CHECK(binomial_tail(400, 0, 0.5) == 1.0);
    CHECK(binomial_tail(10, 10, 0.5) == 0.0009765625);  // 2^-10, exact
    CHECK(binomial_tail(400, 287, 0.5) < 1e-15);

    CHECK_THROWS_AS((void)binomial_tail(10, 11, 0.5), domain_error);
    CHECK_THROWS_AS((void)binomial_tail(10, -1, 0.5), domain_error);
    CHECK_THROWS_AS((void)binomial_tail(10, 5, 0.0), domain_error);
    CHECK_THROWS_AS((void)binomial_tail(10, 5, 1.0), domain_error);
}

TEST_CASE("binomial_tail equals exhaustive enumeration for n <= 20, exactly") {
    for (const int n : {1, 2, 3, 7, 12, 16, 20}) {
        const auto oracle = testsupport::binomial_tails_by_enumeration(n);
        for (int k = 0; k <= n; ++k)
            CHECK(binomial_tail(n, k, 0.5) == oracle[static_cast<std::size_t>(k)]);
    }
}

TEST_CASE("binomial_tail agrees with the incomplete-beta route") {
    struct Case {
        std::int64_t n, k;
        double p;
    };
    for (const Case c : {Case{400, 287, 0.5}, Case{200, 106, 0.5}, Case{200, 98, 0.5},
                         Case{1000, 300, 0.25}, Case{5000, 2600, 0.5}, Case{144, 100, 0.7},
                         Case{10000, 5200, 0.5}}) {
        const double mine = binomial_tail(c.n, c.k, c.p);
        const double beta = testsupport::binomial_tail_by_incomplete_beta(c.n, c.k, c.p);
        CHECK(mine == doctest::Approx(beta).epsilon(1e-12));
    }
}

TEST_CASE("binomial_tail complement identity and monotonicity") {
    Xoshiro256ss rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::int64_t>(1 + rng.below(2000));
        const auto k = static_cast<std::int64_t>(1 + rng.below(static_cast<std::uint64_t>(n)));
        const double p = 0.05 + 0.9 * rng.unit();
        const double upper = binomial_tail(n, k, p);
        // P(X >= k) + P(X <= k-1) = 1; the lower tail via the flipped coin
        const double lower = binomial_tail(n, n - k + 1, 1.0 - p);
        CHECK(upper + lower == doctest::Approx(1.0).epsilon(1e-12));
    }

    for (std::int64_t k = 1; k <= 400; ++k)
        CHECK(binomial_tail(400, k, 0.5) <= binomial_tail(400, k - 1, 0.5) + 1e-15);
}

TEST_CASE("binomial_test on the audited counts") {
    const BinomialResult strong = binomial_test(287, 400);
    CHECK(strong.p_value < 1e-15);
    CHECK(strong.z_approx > 8.0);

    const BinomialResult weak = binomial_test(106, 200);
    CHECK(weak.p_value >= 0.18);
    CHECK(weak.p_value <= 0.26);
    CHECK(weak.p_value ==
          doctest::Approx(testsupport::binomial_tail_by_incomplete_beta(200, 106, 0.5))
              .epsilon(1e-10));

    const BinomialResult below = binomial_test(98, 200);
    CHECK(below.p_value > 0.5);
    CHECK(below.z_approx < 0.0);
}

TEST_CASE("normal quantile") {
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(normal_quantile(0.995) == doctest::Approx(2.5758293035489004).epsilon(1e-12));
    for (const double q : {0.6, 0.9, 0.99, 0.999})
        CHECK(normal_quantile(q) == doctest::Approx(-normal_quantile(1.0 - q)).epsilon(1e-12));
    CHECK_THROWS_AS((void)normal_quantile(0.0), domain_error);
    CHECK_THROWS_AS((void)normal_quantile(1.0), domain_error);
}

TEST_CASE("wilson interval") {
    SUBCASE("symmetric about 1/2 when the proportion is 1/2") {
        const Interval ci = wilson_ci(200, 400, 0.95);
        CHECK(ci.lo + ci.hi == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ci.lo < 0.5);
        CHECK(ci.hi > 0.5);
    }

    SUBCASE("contains the sample proportion and matches the closed form") {
        const Interval ci = wilson_ci(287, 400, 0.95);
        CHECK(ci.lo <= 0.7175);
        CHECK(ci.hi >= 0.7175);
        // direct evaluation with the standard z for 95%
        const double z = 1.959963984540054;
        const double n = 400.0, phat = 287.0 / 400.0, z2 = z * z;
        const double denominator = 1.0 + z2 / n;
        const double center = (phat + z2 / (2 * n)) / denominator;
        const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denominator;
        CHECK(ci.lo == doctest::Approx(center - half).epsilon(1e-12));
        CHECK(ci.hi == doctest::Approx(center + half).epsilon(1e-12));
    }

    SUBCASE("boundary cases") {
        CHECK(wilson_ci(0, 10, 0.95).lo == 0.0);
        CHECK(wilson_ci(10, 10, 0.95).hi == 1.0);
        CHECK_THROWS_AS((void)wilson_ci(1, 0, 0.95), domain_error);
        CHECK_THROWS_AS((void)wilson_ci(5, 4, 0.95), domain_error);
    }

    SUBCASE("always contains k/n") {
        Xoshiro256ss rng(6);
        for (int trial = 0; trial < 300; ++trial) {
            const auto n = static_cast<std::int64_t>(1 + rng.below(5000));
            const auto k = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n + 1)));
            const Interval ci = wilson_ci(k, n, 0.95);
            const double phat = static_cast<double>(k) / static_cast<double>(n);
            CHECK(ci.lo <= phat + 1e-12);
            CHECK(ci.hi >= phat - 1e-12);
        }
    }
}

TEST_CASE("relative gain reproduces the audited table arithmetic") {
    const double vs_53 = relative_gain(0.7175, 0.53);
    CHECK(std::abs(vs_53 - 35.38) < 0.005);
    CHECK(round_half_up(vs_53, 2) == 35.38);

    const double vs_49 = relative_gain(0.7175, 0.49);
    CHECK(std::abs(vs_49 - 46.43) < 0.005);
    CHECK(round_half_up(vs_49, 2) == 46.43);

    CHECK(relative_gain(0.42, 0.42) == 0.0);
    CHECK_THROWS_AS((void)relative_gain(0.5, 0.0), domain_error);
}

TEST_CASE("round_half_up display rule") {
    CHECK(round_half_up(66.6666666, 2) == 66.67);
    CHECK(round_half_up(35.377358, 2) == 35.38);
    CHECK(round_half_up(1.0 / 3.0, 2) == 0.33);
    CHECK(round_half_up(-1.2345, 2) == -1.23);
    CHECK(round_half_up(2.0, 2) == 2.0);
}

TEST_CASE("gain report captures the data reduction") {
    const GainReport g = gain_report(0.7175, 0.53, 100, 300);
    CHECK(g.relative_gain_percent == doctest::Approx(35.377358490566).epsilon(1e-9));
    CHECK(g.data_reduction_percent == doctest::Approx(200.0 / 3.0).epsilon(1e-12));
    CHECK(round_half_up(g.data_reduction_percent, 2) == 66.67);
}

TEST_CASE("comparison report reproduces the claimed tables") {
    ComparisonEntry yolo{"yolov5_analog", 106, 200, 300};
    ComparisonEntry resnet{"resnet_analog", 98, 200, 300};
    ComparisonEntry smiley{"smileynet_analog", 287, 400, 100};
    const ComparisonReport report = compare_report({yolo, resnet}, smiley);

    CHECK(report.references[0].accuracy() == 0.53);
    CHECK(report.references[1].accuracy() == 0.49);
    CHECK(report.subject.accuracy() == 0.7175);
    CHECK(round_half_up(report.gains[0].relative_gain_percent, 2) == 35.38);
    CHECK(round_half_up(report.gains[1].relative_gain_percent, 2) == 46.43);
    CHECK(round_half_up(report.gains[0].data_reduction_percent, 2) == 66.67);

    const std::string csv = report.to_csv();
    CHECK(csv.find("metric,yolov5_analog,resnet_analog,smileynet_analog,note") !=
          std::string::npos);
    CHECK(csv.find("35.38") != std::string::npos);
    CHECK(csv.find("46.43") != std::string::npos);
    CHECK(csv.find("66.67") != std::string::npos);
    CHECK(csv.find("truncation gives 66") != std::string::npos);

    const std::string text = report.to_text();
    CHECK(text.find("0.7175") != std::string::npos);
    CHECK(text.find("66.67") != std::string::npos);

    SUBCASE("identical entries give zero gains") {
        const ComparisonReport same = compare_report({smiley}, smiley);
        CHECK(same.gains[0].relative_gain_percent == 0.0);
    }
}
