#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tasselab/baselines.hpp"
#include "tasselab/errors.hpp"
#include "tasselab/model.hpp"
#include "tasselab/rng.hpp"
#include "tasselab/simulate.hpp"

namespace tasselab {

// 2x2 counts indexed [parity of tea count][label], label 0 = tails, 1 = heads.
struct ContingencyTable {
    std::array<std::array<std::int64_t, 2>, 2> counts{};

    std::int64_t total() const {
        return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
    }
};

inline ContingencyTable parity_contingency(const Dataset& ds) {
    if (ds.records.empty()) throw domain_error("parity_contingency: empty dataset");
    ContingencyTable table;
    for (const auto& rec : ds.records)
        ++table.counts[static_cast<std::size_t>(rec.image.parity())]
                      [static_cast<std::size_t>(to_int(rec.label))];
    return table;
}

// Plug-in mutual information of the table in bits (0 log 0 = 0). For a 2x2
// table the result lies in [0, 1]: 1 exactly on permutation-diagonal tables,
// 0 exactly when rows are proportional.
inline double mutual_information(const ContingencyTable& table) {
    const double total = static_cast<double>(table.total());
    if (total <= 0.0) throw domain_error("mutual_information: empty table");

    std::array<double, 2> row_sum{};
    std::array<double, 2> col_sum{};
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) {
            row_sum[r] += static_cast<double>(table.counts[r][c]);
            col_sum[c] += static_cast<double>(table.counts[r][c]);
        }

    double mi = 0.0;
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) {
            const double joint = static_cast<double>(table.counts[r][c]) / total;
            if (joint <= 0.0) continue;
            const double independent = (row_sum[r] / total) * (col_sum[c] / total);
            mi += joint * std::log2(joint / independent);
        }
    return std::clamp(mi, 0.0, 1.0);
}

// Control condition: keep every image, replace every label with an
// independent fair coin (top bit of one generator output per record).
inline Dataset honest_relabel(const Dataset& ds, std::uint64_t seed) {
    Dataset out = ds;
    Xoshiro256ss rng(seed);
    for (auto& rec : out.records)
        rec.label = rng.bit() ? FlipOutcome::heads : FlipOutcome::tails;
    out.relabeled = true;
    return out;
}

// A classifier recipe the audit machinery can refit on permuted data.
using FitFn = std::function<Predictor(const Dataset& train_set)>;

inline FitFn parity_oracle_fit_fn() {
    return [](const Dataset& train_set) { return ParityOracle::fit(train_set).predictor(); };
}

inline FitFn majority_fit_fn() {
    return [](const Dataset& train_set) { return MajorityBaseline::fit(train_set).predictor(); };
}

struct PermutationResult {
    double observed_accuracy = 0.0;
    double p_value = 1.0;
    int n_perm = 0;
};

// Permutation test of "does the pipeline beat chance": labels are permuted
// over the WHOLE dataset before splitting (the strictest null, mirroring the
// end-to-end pipeline), the classifier is refit per replica, and
// p = (1 + #{replica accuracy >= observed}) / (n_perm + 1).
// Replica r uses derive_seed(seed, r), so scheduling cannot change the result.
inline PermutationResult permutation_test(const Dataset& ds, const FitFn& fit,
                                          const SplitStrategy& split, int n_perm,
                                          std::uint64_t seed) {
    if (n_perm < 19) throw domain_error("permutation_test: n_perm must be >= 19");

    const auto run_pipeline = [&](const Dataset& data) {
        auto [train_set, test_set] = split_dataset(data, split);
        const Predictor predictor = fit(train_set);
        return evaluate_predictor(predictor, test_set).accuracy;
    };

    PermutationResult result;
    result.n_perm = n_perm;
    result.observed_accuracy = run_pipeline(ds);

    std::vector<FlipOutcome> labels(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) labels[i] = ds.records[i].label;

    int at_least_as_good = 0;
    Dataset permuted = ds;
    for (int replica = 0; replica < n_perm; ++replica) {
        Xoshiro256ss rng(derive_seed(seed, static_cast<std::uint64_t>(replica)));
        std::vector<FlipOutcome> shuffled_labels = labels;
        shuffle(shuffled_labels, rng);
        for (std::size_t i = 0; i < permuted.size(); ++i)
            permuted.records[i].label = shuffled_labels[i];
        if (run_pipeline(permuted) >= result.observed_accuracy) ++at_least_as_good;
    }

    result.p_value = (1.0 + at_least_as_good) / (static_cast<double>(n_perm) + 1.0);
    return result;
}

enum class Finding : std::uint8_t {
    parity_leak,
    no_parity_signal,
    deterministic_labels,
    sequential_split_warning,
    train_test_overlap_warning,
};

inline const char* to_string(Finding f) noexcept {
    switch (f) {
        case Finding::parity_leak: return "PARITY_LEAK";
        case Finding::no_parity_signal: return "NO_PARITY_SIGNAL";
        case Finding::deterministic_labels: return "DETERMINISTIC_LABELS";
        case Finding::sequential_split_warning: return "SEQUENTIAL_SPLIT_WARNING";
        default: return "TRAIN_TEST_OVERLAP_WARNING";
    }
}

struct AuditOptions {
    SplitStrategy split = SplitStrategy::sequential();
    FitFn classifier = parity_oracle_fit_fn();
    bool run_permutation = true;
    int n_perm = 99;
    std::uint64_t seed = 1;
    std::uint64_t honest_seed = 2;
    double leak_mi_threshold = 0.5;   // bits; above this: PARITY_LEAK
    double null_mi_threshold = 0.05;  // bits; below this: NO_PARITY_SIGNAL
    // When set, reports overlap between this split's training rounds and the
    // primary split's test rounds (and vice versa), the way two experiments
    // sharing one dataset can silently test on each other's training data.
    std::optional<SplitStrategy> compare_split;
};

struct AuditReport {
    ContingencyTable table;
    double mi_bits = 0.0;
    std::optional<PermutationResult> permutation;
    EvalReport honest_accuracy;
    std::vector<Finding> findings;
    std::size_t overlap_count = 0;

    bool has(Finding f) const {
        return std::find(findings.begin(), findings.end(), f) != findings.end();
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["table"] = {{table.counts[0][0], table.counts[0][1]},
                      {table.counts[1][0], table.counts[1][1]}};
        j["mi_bits"] = mi_bits;
        j["perm_p"] = permutation ? nlohmann::ordered_json(permutation->p_value)
                                  : nlohmann::ordered_json(nullptr);
        j["honest_accuracy"] = {{"n", honest_accuracy.n},
                                {"correct", honest_accuracy.correct},
                                {"accuracy", honest_accuracy.accuracy}};
        nlohmann::ordered_json names = nlohmann::ordered_json::array();
        for (const Finding f : findings) names.push_back(to_string(f));
        j["findings"] = names;
        if (overlap_count > 0) j["train_test_overlap"] = overlap_count;
        return j;
    }

    std::string to_text() const {
        std::ostringstream out;
        out << "parity/label contingency (rows: parity 0/1, cols: tails/heads)\n";
        out << "  [" << table.counts[0][0] << ", " << table.counts[0][1] << "]\n";
        out << "  [" << table.counts[1][0] << ", " << table.counts[1][1] << "]\n";
        out << "mutual information: " << mi_bits << " bits\n";
        if (permutation)
            out << "permutation test: observed accuracy " << permutation->observed_accuracy
                << ", p = " << permutation->p_value << " (" << permutation->n_perm
                << " permutations)\n";
        out << "honest-label accuracy: " << honest_accuracy.accuracy << " ("
            << honest_accuracy.correct << "/" << honest_accuracy.n << ")\n";
        if (overlap_count > 0)
            out << "train/test overlap across compared splits: " << overlap_count << " rounds\n";
        out << "findings:";
        if (findings.empty()) out << " none";
        for (const Finding f : findings) out << " " << to_string(f);
        out << "\n";
        return out.str();
    }
};

// Assembles the full diagnosis of a dataset/split combination: where the
// label information actually lives, whether the labels were deterministic to
// begin with, and what happens to accuracy once the labels are honest.
inline AuditReport audit(const Dataset& ds, const AuditOptions& options = {}) {
    AuditReport report;
    report.table = parity_contingency(ds);
    report.mi_bits = mutual_information(report.table);

    if (options.run_permutation)
        report.permutation =
            permutation_test(ds, options.classifier, options.split, options.n_perm, options.seed);

    {
        const Dataset honest = honest_relabel(ds, options.honest_seed);
        auto [train_set, test_set] = split_dataset(honest, options.split);
        report.honest_accuracy = evaluate_predictor(options.classifier(train_set), test_set);
    }

    if (report.mi_bits > options.leak_mi_threshold)
        report.findings.push_back(Finding::parity_leak);
    if (report.mi_bits < options.null_mi_threshold)
        report.findings.push_back(Finding::no_parity_signal);

    const bool deterministic =
        std::all_of(ds.records.begin(), ds.records.end(),
                    [](const DatasetRecord& rec) { return rec.label == coin_outcome(rec.round); });
    if (deterministic && !ds.records.empty())
        report.findings.push_back(Finding::deterministic_labels);

    if (options.split.kind == SplitStrategy::Kind::sequential_300_200 ||
        options.split.kind == SplitStrategy::Kind::every_fifth)
        report.findings.push_back(Finding::sequential_split_warning);

    if (options.compare_split) {
        auto rounds_of = [](const Dataset& part) {
            std::set<int> rounds;
            for (const auto& rec : part.records) rounds.insert(rec.round);
            return rounds;
        };
        auto [train_a, test_a] = split_dataset(ds, options.split);
        auto [train_b, test_b] = split_dataset(ds, *options.compare_split);
        const std::set<int> train_rounds_a = rounds_of(train_a);
        const std::set<int> test_rounds_b = rounds_of(test_b);
        std::size_t overlap = 0;
        for (const int r : test_rounds_b) overlap += train_rounds_a.count(r);
        report.overlap_count = overlap;
        if (overlap > 0) report.findings.push_back(Finding::train_test_overlap_warning);
    }

    return report;
}

}  // namespace tasselab
