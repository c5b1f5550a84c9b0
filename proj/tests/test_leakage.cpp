#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tasselab/audit.hpp"
#include "test_support.hpp"

using namespace tasselab;
using testsupport::small_config;

TEST_CASE("parity contingency counts exactly") {
    SUBCASE("odd k concentrates all mass on a permutation diagonal") {
        const Dataset ds = generate_dataset(small_config(500, 7));
        const ContingencyTable t = parity_contingency(ds);
        CHECK(t.total() == 500);
        const bool diagonal = t.counts[0][0] == 250 && t.counts[1][1] == 250 &&
                              t.counts[0][1] == 0 && t.counts[1][0] == 0;
        const bool antidiagonal = t.counts[0][1] == 250 && t.counts[1][0] == 250 &&
                                  t.counts[0][0] == 0 && t.counts[1][1] == 0;
        CHECK((diagonal || antidiagonal));
    }

    SUBCASE("even k leaves parity constant: one row holds everything") {
        const Dataset ds = generate_dataset(small_config(500, 8));
        const ContingencyTable t = parity_contingency(ds);
        const auto row0 = t.counts[0][0] + t.counts[0][1];
        const auto row1 = t.counts[1][0] + t.counts[1][1];
        CHECK((row0 == 500 || row1 == 500));
        const auto& full = row0 == 500 ? t.counts[0] : t.counts[1];
        CHECK(full[0] == 250);
        CHECK(full[1] == 250);
    }

    SUBCASE("tiny dataset sums to its size") {
        const Dataset ds = generate_dataset(small_config(2, 3));
        CHECK(parity_contingency(ds).total() == 2);
    }

    SUBCASE("empty dataset is a domain error") {
        Dataset empty;
        CHECK_THROWS_AS((void)parity_contingency(empty), domain_error);
    }
}

TEST_CASE("mutual information of 2x2 tables") {
    auto table = [](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
        ContingencyTable t;
        t.counts = {{{a, b}, {c, d}}};
        return t;
    };

    CHECK(mutual_information(table(100, 0, 0, 100)) == 1.0);
    CHECK(mutual_information(table(0, 100, 100, 0)) == 1.0);
    CHECK(mutual_information(table(50, 50, 50, 50)) == 0.0);
    // proportional rows carry no information
    CHECK(mutual_information(table(10, 30, 20, 60)) == doctest::Approx(0.0).epsilon(1e-12));

    SUBCASE("the odd-k pipeline table reaches the full bit") {
        const Dataset ds = generate_dataset(small_config(500, 7));
        CHECK(mutual_information(parity_contingency(ds)) == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("bounded in [0, 1] for random tables") {
        Xoshiro256ss rng(8);
        for (int trial = 0; trial < 500; ++trial) {
            const auto t = table(static_cast<std::int64_t>(rng.below(50)),
                                 static_cast<std::int64_t>(rng.below(50)),
                                 static_cast<std::int64_t>(rng.below(50)),
                                 static_cast<std::int64_t>(rng.below(50)));
            if (t.total() == 0) continue;
            const double mi = mutual_information(t);
            CHECK(mi >= 0.0);
            CHECK(mi <= 1.0 + 1e-12);
        }
    }

    SUBCASE("zero total is a domain error") {
        CHECK_THROWS_AS((void)mutual_information(table(0, 0, 0, 0)), domain_error);
    }
}

TEST_CASE("honest relabeling destroys the signal but not the images") {
    const Dataset ds = generate_dataset(small_config(500, 7, 4));

    SUBCASE("images untouched, flag set, deterministic per seed") {
        const Dataset a = honest_relabel(ds, 13);
        const Dataset b = honest_relabel(ds, 13);
        CHECK(a.relabeled);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            CHECK(a.records[i].image == ds.records[i].image);
            CHECK(a.records[i].label == b.records[i].label);
        }
        const Dataset c = honest_relabel(ds, 14);
        bool any_difference = false;
        for (std::size_t i = 0; i < ds.size(); ++i)
            any_difference |= a.records[i].label != c.records[i].label;
        CHECK(any_difference);
    }

    SUBCASE("parity mutual information collapses below 0.05 bits") {
        int collapsed = 0;
        for (std::uint64_t seed = 0; seed < 40; ++seed)
            if (mutual_information(parity_contingency(honest_relabel(ds, seed))) < 0.05)
                ++collapsed;
        CHECK(collapsed >= 38);
    }

    SUBCASE("label mean stays near 1/2") {
        int in_band = 0;
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            const Dataset honest = honest_relabel(ds, 1000 + seed);
            double mean = 0.0;
            for (const auto& rec : honest.records) mean += to_int(rec.label);
            mean /= static_cast<double>(honest.size());
            if (mean >= 0.44 && mean <= 0.56) ++in_band;
        }
        CHECK(in_band >= 38);
    }
}

TEST_CASE("permutation test") {
    SUBCASE("parity oracle on a leaky dataset: p = 1/100 at 99 permutations") {
        const Dataset ds = generate_dataset(small_config(500, 7, 21));
        const PermutationResult result =
            permutation_test(ds, parity_oracle_fit_fn(), SplitStrategy::sequential(), 99, 5);
        CHECK(result.observed_accuracy == 1.0);
        CHECK(result.p_value == doctest::Approx(0.01).epsilon(1e-12));
    }

    SUBCASE("honest labels: p is usually above 0.05") {
        const Dataset ds = generate_dataset(small_config(200, 7, 22, 6, 6));
        int above = 0;
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            const Dataset honest = honest_relabel(ds, 50 + seed);
            const PermutationResult result = permutation_test(
                honest, parity_oracle_fit_fn(), SplitStrategy::custom(0.5, 1), 99, seed);
            if (result.p_value > 0.05) ++above;
        }
        CHECK(above >= 24);
    }

    SUBCASE("the formula floor: p >= 1/(n_perm+1)") {
        const Dataset ds = generate_dataset(small_config(100, 7, 23, 6, 6));
        const PermutationResult result =
            permutation_test(ds, parity_oracle_fit_fn(), SplitStrategy::custom(0.5, 2), 19, 3);
        CHECK(result.p_value >= 1.0 / 20.0);
    }

    SUBCASE("fewer than 19 permutations is a domain error") {
        const Dataset ds = generate_dataset(small_config(100, 7, 24, 6, 6));
        CHECK_THROWS_AS((void)permutation_test(ds, parity_oracle_fit_fn(),
                                               SplitStrategy::custom(0.5, 2), 18, 3),
                        domain_error);
    }

    SUBCASE("p-values are valid under the null: P(p <= 0.05) <= 0.05 + 1/20") {
        const Dataset ds = generate_dataset(small_config(100, 3, 25, 4, 4));
        int rejections = 0;
        const int seeds = 200;
        for (std::uint64_t seed = 0; seed < seeds; ++seed) {
            const Dataset honest = honest_relabel(ds, derive_seed(77, seed));
            const PermutationResult result = permutation_test(
                honest, parity_oracle_fit_fn(), SplitStrategy::custom(0.5, 9), 19, seed);
            if (result.p_value <= 0.05) ++rejections;
        }
        CHECK(static_cast<double>(rejections) / seeds <= 0.05 + 1.0 / 20.0);
    }
}

TEST_CASE("audit assembles the findings") {
    SUBCASE("the default pipeline is flagged on all three counts") {
        const Dataset ds = generate_dataset(small_config(500, 7, 31));
        AuditOptions options;
        options.split = SplitStrategy::sequential();
        const AuditReport report = audit(ds, options);
        CHECK(report.has(Finding::parity_leak));
        CHECK(report.has(Finding::deterministic_labels));
        CHECK(report.has(Finding::sequential_split_warning));
        CHECK_FALSE(report.has(Finding::no_parity_signal));
        CHECK(report.mi_bits == doctest::Approx(1.0).epsilon(1e-9));
        REQUIRE(report.permutation.has_value());
        CHECK(report.permutation->p_value <= 0.01 + 1e-12);
        // honest control collapses to chance
        CHECK(std::abs(report.honest_accuracy.accuracy - 0.5) < 0.1);
    }

    SUBCASE("even k: no parity signal, no leak") {
        const Dataset ds = generate_dataset(small_config(500, 8, 32));
        const AuditReport report = audit(ds);
        CHECK(report.has(Finding::no_parity_signal));
        CHECK_FALSE(report.has(Finding::parity_leak));
    }

    SUBCASE("honest relabeling clears DETERMINISTIC_LABELS") {
        const Dataset ds = generate_dataset(small_config(500, 7, 33));
        const AuditReport report = audit(honest_relabel(ds, 3));
        CHECK_FALSE(report.has(Finding::deterministic_labels));
    }

    SUBCASE("comparing the protocol's two splits exposes 240 overlapping rounds") {
        const Dataset ds = generate_dataset(small_config(500, 7, 34));
        AuditOptions options;
        options.split = SplitStrategy::sequential();
        options.compare_split = SplitStrategy::every_fifth();
        const AuditReport report = audit(ds, options);
        CHECK(report.overlap_count == 240);
        CHECK(report.has(Finding::train_test_overlap_warning));
    }

    SUBCASE("random split raises no sequential warning") {
        const Dataset ds = generate_dataset(small_config(500, 7, 35));
        AuditOptions options;
        options.split = SplitStrategy::shuffled(4);
        const AuditReport report = audit(ds, options);
        CHECK_FALSE(report.has(Finding::sequential_split_warning));
    }

    SUBCASE("JSON has the pinned field names") {
        const Dataset ds = generate_dataset(small_config(500, 7, 36));
        const auto j = audit(ds).to_json();
        CHECK(j.contains("table"));
        CHECK(j.contains("mi_bits"));
        CHECK(j.contains("perm_p"));
        CHECK(j.contains("honest_accuracy"));
        CHECK(j.contains("findings"));
        CHECK(j["table"].size() == 2);
        CHECK(j["table"][0].size() == 2);
    }
}
