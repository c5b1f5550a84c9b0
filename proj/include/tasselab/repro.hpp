#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "tasselab/audit.hpp"
#include "tasselab/baselines.hpp"
#include "tasselab/dataset_io.hpp"
#include "tasselab/lottery.hpp"
#include "tasselab/model.hpp"
#include "tasselab/simulate.hpp"
#include "tasselab/stats.hpp"
#include "tasselab/train.hpp"

// One-shot reproduction of the full claim under audit: simulate the dataset,
// run the baselines and the leak-aware models under both splits of the audited protocol,
// audit the leak, rerun under honest labels, and set the measured numbers
// against the claimed ones. Everything is a pure function of the seed.

namespace tasselab {

// The headline claim being audited: three classifiers, their reported test
// counts, training set sizes, and the per-bit accuracy fed into the lottery
// arithmetic.
struct ClaimedResults {
    ComparisonEntry yolov5_analog{"yolov5_analog", 106, 200, 300};
    ComparisonEntry resnet_analog{"resnet_analog", 98, 200, 300};
    ComparisonEntry smileynet_analog{"smileynet_analog", 287, 400, 100};
};

struct ReproOptions {
    std::uint64_t seed = 42;
    int rounds = 500;
    int k_change = 7;
    SamplingMode mode = SamplingMode::distinct;
    std::filesystem::path out_dir;  // empty: nothing is written
    bool write_dataset = false;
};

struct ExperimentResult {
    std::string split_name;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    EvalReport majority;
    EvalReport parity_oracle;
    EvalReport logistic_parity;
    EvalReport mlp_count_parity;
};

struct ReproSummary {
    SimConfig config;
    std::string provenance;
    std::string content_hash;
    ExperimentResult sequential;
    ExperimentResult every_fifth;
    bool smiley_noop = false;
    EvalReport honest_oracle;  // parity oracle after honest relabeling
    AuditReport audit_report;
    ComparisonReport claimed;
    ProbabilityReport lottery_report;

    nlohmann::ordered_json to_json() const;
    std::string to_text() const;
};

// Content hash over everything a dataset is: config string, base image, and
// every record's round, label and pixels.
inline std::string dataset_content_hash(const Dataset& ds) {
    Sha256 hasher;
    hasher.update(canonical_config_string(ds.config));
    hasher.update(ds.base_image.cells().data(), ds.base_image.cells().size());
    for (const auto& rec : ds.records) {
        const std::string head =
            std::to_string(rec.round) + ":" + std::to_string(to_int(rec.label)) + ":";
        hasher.update(head);
        hasher.update(rec.image.cells().data(), rec.image.cells().size());
    }
    const auto raw = hasher.digest();
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (const auto byte : raw) {
        out.push_back(hex[byte >> 4]);
        out.push_back(hex[byte & 0x0f]);
    }
    return out;
}

namespace detail {

inline ExperimentResult run_experiment(const Dataset& ds, const SplitStrategy& split,
                                       std::uint64_t seed) {
    auto [train_set, test_set] = split_dataset(ds, split);

    ExperimentResult result;
    result.split_name = split.name();
    result.train_size = train_set.size();
    result.test_size = test_set.size();

    result.majority =
        evaluate_predictor(MajorityBaseline::fit(train_set).predictor(), test_set);
    result.parity_oracle =
        evaluate_predictor(ParityOracle::fit(train_set).predictor(), test_set);

    TrainConfig tc;
    tc.seed = derive_seed(seed, 101);
    const ModelState logistic = init_model(ModelKind::linear, FeatureScheme::parity,
                                           ds.config.width, ds.config.height, 0,
                                           derive_seed(seed, 102));
    result.logistic_parity = evaluate(train(logistic, train_set, tc).model, test_set);

    TrainConfig mc;
    mc.seed = derive_seed(seed, 103);
    const ModelState mlp = init_model(ModelKind::mlp, FeatureScheme::count_parity,
                                      ds.config.width, ds.config.height, 16,
                                      derive_seed(seed, 104));
    result.mlp_count_parity = evaluate(train(mlp, train_set, mc).model, test_set);
    return result;
}

inline nlohmann::ordered_json eval_json(const EvalReport& e) {
    return {{"n", e.n}, {"correct", e.correct}, {"accuracy", e.accuracy}};
}

inline nlohmann::ordered_json experiment_json(const ExperimentResult& r) {
    nlohmann::ordered_json j;
    j["split"] = r.split_name;
    j["train_size"] = r.train_size;
    j["test_size"] = r.test_size;
    j["majority"] = eval_json(r.majority);
    j["parity_oracle"] = eval_json(r.parity_oracle);
    j["logistic_parity"] = eval_json(r.logistic_parity);
    j["mlp_count_parity"] = eval_json(r.mlp_count_parity);
    return j;
}

}  // namespace detail

inline ReproSummary run_repro(const ReproOptions& options) {
    SimConfig cfg;
    cfg.rounds = options.rounds;
    cfg.k_change = options.k_change;
    cfg.mode = options.mode;
    cfg.seed = options.seed;
    cfg.base.seed = derive_seed(options.seed, 1);
    cfg.validate();

    ReproSummary summary;
    summary.config = cfg;

    const Dataset ds = generate_dataset(cfg);
    summary.provenance = ds.provenance;
    summary.content_hash = dataset_content_hash(ds);

    // The audited protocol is defined for 500 records; other sizes fall
    // back to a seeded 60/40 split so small demo runs still work end to end.
    const SplitStrategy primary_split =
        ds.size() == 500 ? SplitStrategy::sequential()
                         : SplitStrategy::custom(0.6, derive_seed(options.seed, 201));

    summary.sequential = detail::run_experiment(ds, primary_split, options.seed);
    summary.every_fifth = detail::run_experiment(ds, SplitStrategy::every_fifth(), options.seed);

    // Smileyfication demo on a freshly trained model: provably a no-op.
    {
        TrainConfig tc;
        tc.seed = derive_seed(options.seed, 105);
        const ModelState base = init_model(ModelKind::linear, FeatureScheme::parity, cfg.width,
                                           cfg.height, 0, derive_seed(options.seed, 106));
        const ModelState trained =
            train(base, split_dataset(ds, primary_split).first, tc).model;
        const TrainResult smiled = smileyfy(trained, 1000, tc);
        summary.smiley_noop = smiled.model.bit_identical_to(trained);
    }

    {
        const Dataset honest = honest_relabel(ds, derive_seed(options.seed, 107));
        auto [train_set, test_set] = split_dataset(honest, primary_split);
        summary.honest_oracle =
            evaluate_predictor(ParityOracle::fit(train_set).predictor(), test_set);
    }

    AuditOptions audit_options;
    audit_options.seed = derive_seed(options.seed, 108);
    audit_options.honest_seed = derive_seed(options.seed, 107);
    audit_options.split = primary_split;
    audit_options.compare_split = SplitStrategy::every_fifth();
    summary.audit_report = audit(ds, audit_options);

    const ClaimedResults claim;
    summary.claimed =
        compare_report({claim.yolov5_analog, claim.resnet_analog}, claim.smileynet_analog);

    summary.lottery_report = probability_report(claim.smileynet_analog.accuracy());

    if (!options.out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(options.out_dir, ec);
        if (ec)
            throw data_error("cannot create directory " + options.out_dir.string() + ": " +
                             ec.message());
        if (options.write_dataset) export_dataset(ds, options.out_dir / "dataset");

        auto write_file = [&](const std::string& name, const std::string& body) {
            const auto path = options.out_dir / name;
            std::ofstream out(path, std::ios::binary);
            if (!out) throw data_error("cannot open for writing: " + path.string());
            out << body;
            if (!out) throw data_error("write failed: " + path.string());
        };
        write_file("report.txt", summary.to_text());
        write_file("report.json", summary.to_json().dump(2) + "\n");
        write_file("comparison.csv", summary.claimed.to_csv());
        write_file("audit.json", summary.audit_report.to_json().dump(2) + "\n");
        write_file("audit.txt", summary.audit_report.to_text());
    }
    return summary;
}

inline nlohmann::ordered_json ReproSummary::to_json() const {
    nlohmann::ordered_json j;
    j["schema"] = "tasselab.repro/v1";
    j["config"] = config_to_json(config);
    j["provenance_hash"] = provenance;
    j["dataset_content_hash"] = content_hash;
    j["experiments"] = {detail::experiment_json(sequential), detail::experiment_json(every_fifth)};
    j["smileyfication_changed_parameters"] = !smiley_noop;
    j["honest_oracle"] = detail::eval_json(honest_oracle);
    j["audit"] = audit_report.to_json();
    j["lottery"] = lottery_report.to_json();
    return j;
}

inline std::string ReproSummary::to_text() const {
    std::ostringstream out;
    char buf[64];
    auto acc = [&](const EvalReport& e) {
        std::snprintf(buf, sizeof(buf), "%.4f (%zu/%zu)", e.accuracy, e.correct, e.n);
        return std::string(buf);
    };

    out << "=== tasselab repro ===\n";
    out << "config: " << config.rounds << " rounds, " << config.width << "x" << config.height
        << ", k_change " << config.k_change << " (" << to_string(config.mode) << "), seed "
        << config.seed << "\n";
    out << "provenance " << provenance << "\n";
    out << "dataset content hash " << content_hash << "\n\n";

    for (const ExperimentResult* e : {&sequential, &every_fifth}) {
        out << "--- split " << e->split_name << " (train " << e->train_size << " / test "
            << e->test_size << ") ---\n";
        out << "  majority baseline        " << acc(e->majority) << "\n";
        out << "  parity oracle            " << acc(e->parity_oracle) << "\n";
        out << "  logistic, parity feature " << acc(e->logistic_parity) << "\n";
        out << "  mlp, count+parity        " << acc(e->mlp_count_parity) << "\n";
    }

    out << "\nsmileyfication: parameters "
        << (smiley_noop ? "bit-identical after 1000 smiley presentations (zero gradient, no-op)"
                        : "CHANGED (unexpected)")
        << "\n";
    out << "honest-label control: parity oracle " << acc(honest_oracle)
        << " -- chance-level once labels are real coin flips\n\n";

    out << "--- audit ---\n" << audit_report.to_text() << "\n";

    out << "--- claimed figures under audit ---\n" << claimed.to_text() << "\n";
    out << "--- lottery arithmetic ---\n" << lottery_report.to_text();
    return out.str();
}

}  // namespace tasselab
