#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "tasselab/repro.hpp"

using namespace tasselab;

namespace fs = std::filesystem;

TEST_CASE("repro summary tells the whole story on a small odd-k run") {
    ReproOptions options;
    options.seed = 7;
    options.rounds = 60;
    options.k_change = 7;
    const ReproSummary summary = run_repro(options);

    // the leak is total for odd k, under any split
    CHECK(summary.sequential.parity_oracle.accuracy == 1.0);
    CHECK(summary.every_fifth.parity_oracle.accuracy == 1.0);
    CHECK(summary.sequential.majority.accuracy == doctest::Approx(0.5).epsilon(0.1));

    CHECK(summary.smiley_noop);
    CHECK(std::abs(summary.honest_oracle.accuracy - 0.5) < 0.25);

    CHECK(summary.audit_report.has(Finding::parity_leak));
    CHECK(summary.audit_report.has(Finding::deterministic_labels));

    // claimed-table arithmetic rides along unchanged
    CHECK(summary.claimed.subject.accuracy() == 0.7175);
    CHECK(std::abs(summary.lottery_report.p_win_claimed - 0.03615922) < 1e-8);

    const auto j = summary.to_json();
    CHECK(j.contains("dataset_content_hash"));
    CHECK(j["experiments"].size() == 2);
    CHECK(j["smileyfication_changed_parameters"] == false);

    const std::string text = summary.to_text();
    CHECK(text.find("parity oracle") != std::string::npos);
    CHECK(text.find("66.67") != std::string::npos);
}

TEST_CASE("repro writes its report files only when asked") {
    const fs::path dir = fs::temp_directory_path() / "tasselab_test_repro_files";
    fs::remove_all(dir);

    ReproOptions options;
    options.seed = 3;
    options.rounds = 40;
    options.k_change = 5;
    (void)run_repro(options);  // no out_dir: nothing written
    CHECK_FALSE(fs::exists(dir));

    options.out_dir = dir;
    options.write_dataset = true;
    (void)run_repro(options);
    for (const char* name : {"report.txt", "report.json", "comparison.csv", "audit.json",
                             "audit.txt"})
        CHECK(fs::exists(dir / name));
    CHECK(fs::exists(dir / "dataset" / "manifest.csv"));
    CHECK(fs::exists(dir / "dataset" / "img_00000.pgm"));
    fs::remove_all(dir);
}

TEST_CASE("even k_change removes every effect") {
    ReproOptions options;
    options.seed = 11;
    options.rounds = 60;
    options.k_change = 6;
    const ReproSummary summary = run_repro(options);
    CHECK_FALSE(summary.audit_report.has(Finding::parity_leak));
    CHECK(summary.audit_report.has(Finding::no_parity_signal));
    CHECK(summary.sequential.parity_oracle.accuracy < 0.8);
}
