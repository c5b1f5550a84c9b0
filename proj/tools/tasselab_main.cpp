// tasselab command-line tool: dataset generation, training, evaluation,
// leakage auditing, lottery analysis, and the one-shot repro pipeline.
//
// Exit codes: 0 success, 1 usage/domain error, 2 data or I/O error,
// 3 leak detected (only with `audit --fail-on-leak`).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tasselab/tasselab.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitLeak = 3;

// Optional JSON config file; command-line flags override its values.
// Layout: { "global": {...}, "<command>": {...} } with keys named after the
// long flags (without dashes).
class JsonConfig {
public:
    void load(const fs::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw tasselab::data_error("cannot open config file: " + path.string());
        try {
            in >> root_;
        } catch (const json::exception& e) {
            throw tasselab::data_error(path.string() + ": invalid JSON: " + e.what());
        }
        loaded_ = true;
    }

    template <typename T>
    void apply(const CLI::App& cmd, const std::string& flag, const std::string& key, T& var) const {
        if (!loaded_ || cmd.count(flag) > 0) return;
        for (const char* section : {cmd.get_name().c_str(), "global"}) {
            if (root_.contains(section) && root_[section].contains(key)) {
                var = root_[section][key].get<T>();
                return;
            }
        }
    }

private:
    json root_;
    bool loaded_ = false;
};

struct GlobalFlags {
    std::uint64_t seed = 42;
    std::string out;
    std::string config_path;
    bool quiet = false;
};

void add_global_flags(CLI::App* cmd, GlobalFlags& flags) {
    cmd->add_option("--seed", flags.seed, "Master seed for this command");
    cmd->add_option("--out,-o", flags.out, "Output directory");
    cmd->add_option("--config", flags.config_path, "JSON config file (flags override)");
    cmd->add_flag("--quiet,-q", flags.quiet, "Suppress progress output");
}

void write_text_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw tasselab::data_error("cannot open for writing: " + path.string());
    out << body;
    if (!out) throw tasselab::data_error("write failed: " + path.string());
}

void ensure_dir(const fs::path& path) {
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec)
        throw tasselab::data_error("cannot create directory " + path.string() + ": " +
                                   ec.message());
}

tasselab::Dataset load_dataset(const std::string& dir) {
    if (dir.empty()) throw tasselab::domain_error("--data is required");
    return tasselab::import_dataset(dir);
}

tasselab::SplitStrategy resolve_split(const std::string& name, std::size_t dataset_size,
                                      double fraction, std::uint64_t seed) {
    if (name == "auto")
        return dataset_size == 500 ? tasselab::SplitStrategy::sequential()
                                   : tasselab::SplitStrategy::custom(fraction, seed);
    return tasselab::split_strategy_from_string(name, fraction, seed);
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    GlobalFlags global;
    int rounds = 500;
    int k_change = 7;
    int width = 100;
    int height = 100;
    std::string mode = "distinct";
    double tea_fraction = 0.3;
    int blob_count = 12;
    std::uint64_t base_seed = 0;
    bool base_seed_set = false;
};

int run_generate(const GenerateArgs& args) {
    tasselab::SimConfig cfg;
    cfg.width = args.width;
    cfg.height = args.height;
    cfg.k_change = args.k_change;
    cfg.mode = tasselab::sampling_mode_from_string(args.mode);
    cfg.rounds = args.rounds;
    cfg.seed = args.global.seed;
    cfg.base.tea_fraction = args.tea_fraction;
    cfg.base.blob_count = args.blob_count;
    cfg.base.seed = args.base_seed_set ? args.base_seed : tasselab::derive_seed(cfg.seed, 1);
    cfg.validate();

    if (args.global.out.empty()) throw tasselab::domain_error("--out is required");
    const tasselab::Dataset ds = tasselab::generate_dataset(cfg);
    tasselab::export_dataset(ds, args.global.out);

    // parity trace for external plotting
    std::string trace = "round,tea_count,parity,label\n";
    for (const auto& rec : ds.records)
        trace += std::to_string(rec.round) + "," + std::to_string(rec.image.tea_count()) + "," +
                 std::to_string(rec.image.parity()) + "," + std::to_string(to_int(rec.label)) +
                 "\n";
    write_text_file(fs::path(args.global.out) / "parity_trace.csv", trace);

    if (!args.global.quiet) {
        std::printf("wrote %d rounds (%d PGM files) to %s\n", cfg.rounds, cfg.rounds + 1,
                    args.global.out.c_str());
        std::printf("k_change %d (%s), %dx%d, seed %llu\n", cfg.k_change,
                    tasselab::to_string(cfg.mode), cfg.width, cfg.height,
                    static_cast<unsigned long long>(cfg.seed));
        std::printf("provenance %s\n", ds.provenance.c_str());
        std::printf("parity trace preview (round: parity label):");
        for (std::size_t i = 0; i < std::min<std::size_t>(ds.size(), 10); ++i)
            std::printf(" %d:%d/%d", ds.records[i].round, ds.records[i].image.parity(),
                        to_int(ds.records[i].label));
        std::printf("%s\n", ds.size() > 10 ? " ..." : "");
    }
    return kExitOk;
}

// ------------------------------------------------------------- train / eval

struct TrainArgs {
    GlobalFlags global;
    std::string data;
    std::string model_kind = "linear";
    int hidden = 16;
    std::string features = "parity";
    std::string loss = "cross_entropy";
    double learning_rate = 0.1;
    int epochs = 200;
    int batch_size = 32;
    std::string split = "auto";
    double train_fraction = 0.6;
    std::uint64_t split_seed = 0;
};

int run_train(const TrainArgs& args) {
    const tasselab::Dataset ds = load_dataset(args.data);
    const tasselab::SplitStrategy split =
        resolve_split(args.split, ds.size(), args.train_fraction, args.split_seed);
    const auto [train_set, test_set] = tasselab::split_dataset(ds, split);

    const auto kind = tasselab::model_kind_from_string(args.model_kind);
    const auto scheme = tasselab::feature_scheme_from_string(args.features);
    tasselab::TrainConfig cfg;
    cfg.loss = tasselab::loss_kind_from_string(args.loss);
    cfg.learning_rate = args.learning_rate;
    cfg.epochs = args.epochs;
    cfg.batch_size = args.batch_size;
    cfg.seed = tasselab::derive_seed(args.global.seed, 11);

    if (cfg.loss == tasselab::LossKind::smiley && !args.global.quiet)
        std::printf("warning: smiley loss has zero gradient; parameters unchanged\n");

    const tasselab::ModelState model =
        init_model(kind, scheme, ds.config.width, ds.config.height,
                   kind == tasselab::ModelKind::mlp ? args.hidden : 0,
                   tasselab::derive_seed(args.global.seed, 12));
    const tasselab::TrainResult result = tasselab::train(model, train_set, cfg);

    const tasselab::EvalReport on_train = tasselab::evaluate(result.model, train_set);
    const tasselab::EvalReport on_test = tasselab::evaluate(result.model, test_set);
    const tasselab::BinomialResult significance = tasselab::binomial_test(
        static_cast<std::int64_t>(on_test.correct), static_cast<std::int64_t>(on_test.n));

    if (!args.global.quiet) {
        std::printf("split %s: train %zu / test %zu\n", split.name().c_str(), train_set.size(),
                    test_set.size());
        std::printf("train accuracy %.4f (%zu/%zu)\n", on_train.accuracy, on_train.correct,
                    on_train.n);
        std::printf("test accuracy  %.4f (%zu/%zu)\n", on_test.accuracy, on_test.correct,
                    on_test.n);
        std::printf("exact binomial test vs 0.5: p = %.6g (z ~ %.2f)\n", significance.p_value,
                    significance.z_approx);
    }

    if (!args.global.out.empty()) {
        ensure_dir(args.global.out);
        tasselab::save_checkpoint(result.model, fs::path(args.global.out) / "model.ckpt");
        std::string history = "epoch,mean_loss\n";
        char line[64];
        for (std::size_t e = 0; e < result.history.size(); ++e) {
            std::snprintf(line, sizeof(line), "%zu,%.17g\n", e, result.history[e]);
            history += line;
        }
        write_text_file(fs::path(args.global.out) / "history.csv", history);

        ordered_json resolved;
        resolved["command"] = "train";
        resolved["data"] = args.data;
        resolved["dataset_provenance"] = ds.provenance;
        resolved["model"] = tasselab::to_string(kind);
        resolved["hidden"] = kind == tasselab::ModelKind::mlp ? args.hidden : 0;
        resolved["features"] = tasselab::to_string(scheme);
        resolved["loss"] = tasselab::to_string(cfg.loss);
        resolved["learning_rate"] = cfg.learning_rate;
        resolved["epochs"] = cfg.epochs;
        resolved["batch_size"] = cfg.batch_size;
        resolved["split"] = split.name();
        resolved["train_fraction"] = split.train_fraction;
        resolved["split_seed"] = split.seed;
        resolved["seed"] = args.global.seed;
        resolved["test_accuracy"] = on_test.accuracy;
        write_text_file(fs::path(args.global.out) / "run_config.json", resolved.dump(2) + "\n");
    }
    return kExitOk;
}

struct EvalArgs {
    GlobalFlags global;
    std::string data;
    std::string model_path;
    std::int64_t correct = -1;
    std::int64_t n = -1;
    double p0 = 0.5;
    std::string split = "none";
    double train_fraction = 0.6;
    std::uint64_t split_seed = 0;
};

int run_eval(const EvalArgs& args) {
    // arithmetic mode: judge a reported count without any dataset
    if (args.correct >= 0 || args.n >= 0) {
        if (args.correct < 0 || args.n <= 0)
            throw tasselab::domain_error("arithmetic mode needs both --correct and --n");
        const auto result = tasselab::binomial_test(args.correct, args.n, args.p0);
        const auto ci = tasselab::wilson_ci(args.correct, args.n);
        std::printf("accuracy %.4f (%lld/%lld)\n",
                    static_cast<double>(args.correct) / static_cast<double>(args.n),
                    static_cast<long long>(args.correct), static_cast<long long>(args.n));
        std::printf("exact binomial test vs %.4g: p = %.6g (z ~ %.2f)\n", args.p0, result.p_value,
                    result.z_approx);
        std::printf("wilson 95%% interval [%.4f, %.4f]\n", ci.lo, ci.hi);
        return kExitOk;
    }

    if (args.model_path.empty()) throw tasselab::domain_error("--model is required");
    const tasselab::ModelState model = tasselab::load_checkpoint(args.model_path);
    const tasselab::Dataset ds = load_dataset(args.data);

    tasselab::EvalReport report;
    if (args.split == "none") {
        report = tasselab::evaluate(model, ds);
    } else {
        const auto split = resolve_split(args.split, ds.size(), args.train_fraction,
                                         args.split_seed);
        report = tasselab::evaluate(model, tasselab::split_dataset(ds, split).second);
    }
    const auto significance = tasselab::binomial_test(static_cast<std::int64_t>(report.correct),
                                                      static_cast<std::int64_t>(report.n));
    std::printf("accuracy %.4f (%zu/%zu)\n", report.accuracy, report.correct, report.n);
    std::printf("exact binomial test vs 0.5: p = %.6g (z ~ %.2f)\n", significance.p_value,
                significance.z_approx);
    return kExitOk;
}

// --------------------------------------------------------------------- audit

struct AuditArgs {
    GlobalFlags global;
    std::string data;
    std::string split = "auto";
    double train_fraction = 0.6;
    std::uint64_t split_seed = 0;
    std::string classifier = "parity_oracle";
    int n_perm = 99;
    bool no_permutation = false;
    bool honest_relabel = false;
    std::uint64_t relabel_seed = 9;
    bool fail_on_leak = false;
    bool compare_claim_splits = false;
};

tasselab::FitFn resolve_classifier(const std::string& name, std::uint64_t seed) {
    if (name == "parity_oracle") return tasselab::parity_oracle_fit_fn();
    if (name == "majority") return tasselab::majority_fit_fn();
    if (name == "logistic_parity") {
        return [seed](const tasselab::Dataset& train_set) {
            const auto& cfg = train_set.config;
            tasselab::TrainConfig tc;
            tc.learning_rate = 0.5;
            tc.seed = tasselab::derive_seed(seed, 41);
            const auto model = init_model(tasselab::ModelKind::linear,
                                          tasselab::FeatureScheme::parity, cfg.width, cfg.height,
                                          0, tasselab::derive_seed(seed, 42));
            const auto trained = tasselab::train(model, train_set, tc).model;
            return tasselab::Predictor(
                [trained](const tasselab::TeaImage& img) { return predict(trained, img); });
        };
    }
    throw tasselab::domain_error("unknown classifier '" + name +
                                 "' (parity_oracle | majority | logistic_parity)");
}

int run_audit(const AuditArgs& args) {
    tasselab::Dataset ds = load_dataset(args.data);
    if (args.honest_relabel) ds = tasselab::honest_relabel(ds, args.relabel_seed);

    tasselab::AuditOptions options;
    options.split = resolve_split(args.split, ds.size(), args.train_fraction, args.split_seed);
    options.classifier = resolve_classifier(args.classifier, args.global.seed);
    options.run_permutation = !args.no_permutation;
    options.n_perm = args.n_perm;
    options.seed = tasselab::derive_seed(args.global.seed, 21);
    options.honest_seed = tasselab::derive_seed(args.global.seed, 22);
    if (args.compare_claim_splits && ds.size() == 500)
        options.compare_split = tasselab::SplitStrategy::every_fifth();

    const tasselab::AuditReport report = tasselab::audit(ds, options);

    if (!args.global.quiet) std::fputs(report.to_text().c_str(), stdout);
    if (!args.global.out.empty()) {
        ensure_dir(args.global.out);
        write_text_file(fs::path(args.global.out) / "audit.json", report.to_json().dump(2) + "\n");
        write_text_file(fs::path(args.global.out) / "audit.txt", report.to_text());
    }

    if (args.fail_on_leak && report.has(tasselab::Finding::parity_leak)) return kExitLeak;
    return kExitOk;
}

// ------------------------------------------------------------------- lottery

struct LotteryArgs {
    GlobalFlags global;
    double p_bit = -1.0;
    bool simulate = false;
    std::uint64_t trials = 100000;
    bool enumerate_range = false;
};

int run_lottery(const LotteryArgs& args) {
    if (args.enumerate_range) {
        const std::set<int> reachable = tasselab::enumerate_reachable();
        std::printf("reachable combiner values: [%d, %d] (%zu values)\n", *reachable.begin(),
                    *reachable.rbegin(), reachable.size());
        std::printf("unreachable pool values:");
        for (int v = 1; v <= tasselab::kLotteryPoolMax; ++v)
            if (!reachable.count(v)) std::printf(" %d", v);
        std::printf("\n");
        if (args.p_bit < 0.0) return kExitOk;
    }

    if (args.p_bit < 0.0)
        throw tasselab::domain_error("--p is required (per-bit accuracy in (0, 1])");

    tasselab::ProbabilityReport report = tasselab::probability_report(args.p_bit);
    if (args.simulate)
        report.mc = tasselab::monte_carlo_jackpot(args.p_bit, args.trials,
                                                  tasselab::derive_seed(args.global.seed, 31));

    if (!args.global.quiet) std::fputs(report.to_text().c_str(), stdout);
    if (!args.global.out.empty()) {
        ensure_dir(args.global.out);
        write_text_file(fs::path(args.global.out) / "lottery.json",
                        report.to_json().dump(2) + "\n");
        write_text_file(fs::path(args.global.out) / "lottery.txt", report.to_text());
    }
    return kExitOk;
}

// --------------------------------------------------------------------- repro

struct ReproArgs {
    GlobalFlags global;
    int rounds = 500;
    int k_change = 7;
    std::string mode = "distinct";
    bool write_dataset = false;
};

int run_repro_cmd(const ReproArgs& args) {
    tasselab::ReproOptions options;
    options.seed = args.global.seed;
    options.rounds = args.rounds;
    options.k_change = args.k_change;
    options.mode = tasselab::sampling_mode_from_string(args.mode);
    options.out_dir = args.global.out;
    options.write_dataset = args.write_dataset;

    const tasselab::ReproSummary summary = tasselab::run_repro(options);
    if (!args.global.quiet) std::fputs(summary.to_text().c_str(), stdout);
    if (!args.global.out.empty() && !args.global.quiet)
        std::printf("\nreport files written to %s\n", args.global.out.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tasselab: a tea-leaf coin-flip 'psychic' pipeline and the audit that debunks it"};
    app.require_subcommand(1);

    // Peek at --config before the real parse so file values become defaults.
    JsonConfig file_config;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") {
            try {
                file_config.load(argv[i + 1]);
            } catch (const tasselab::data_error& e) {
                std::fprintf(stderr, "error: %s\n", e.what());
                return kExitData;
            }
        }

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand("generate", "Simulate a labeled tea-leaf dataset");
    add_global_flags(generate, gen.global);
    generate->add_option("--rounds", gen.rounds, "Number of rounds (labeled images)");
    generate->add_option("--k,--k-change", gen.k_change, "Cells toggled per round");
    generate->add_option("--width", gen.width, "Image width in pixels");
    generate->add_option("--height", gen.height, "Image height in pixels");
    generate->add_option("--mode", gen.mode, "Coordinate sampling: distinct | with_replacement");
    generate->add_option("--tea-fraction", gen.tea_fraction, "Target tea density of the base image");
    generate->add_option("--blobs", gen.blob_count, "Blob count for the base image (0: scatter)");
    auto* base_seed_opt = generate->add_option("--base-seed", gen.base_seed,
                                               "Seed for the base image (default: derived)");

    TrainArgs tr;
    CLI::App* train_cmd = app.add_subcommand("train", "Train a classifier on a dataset");
    add_global_flags(train_cmd, tr.global);
    train_cmd->add_option("--data", tr.data, "Dataset directory");
    train_cmd->add_option("--model", tr.model_kind, "linear | mlp");
    train_cmd->add_option("--hidden", tr.hidden, "Hidden width (mlp)");
    train_cmd->add_option("--features", tr.features, "raw | count | parity | count_parity");
    train_cmd->add_option("--loss", tr.loss, "cross_entropy | squared | smiley");
    train_cmd->add_option("--lr", tr.learning_rate, "Learning rate");
    train_cmd->add_option("--epochs", tr.epochs, "Training epochs");
    train_cmd->add_option("--batch", tr.batch_size, "Mini-batch size");
    train_cmd->add_option("--split", tr.split,
                          "auto | sequential | every_fifth | shuffled | custom");
    train_cmd->add_option("--train-fraction", tr.train_fraction, "Train fraction (custom split)");
    train_cmd->add_option("--split-seed", tr.split_seed, "Seed for shuffled/custom splits");

    EvalArgs ev;
    CLI::App* eval_cmd =
        app.add_subcommand("eval", "Evaluate a checkpoint, or judge a reported count");
    add_global_flags(eval_cmd, ev.global);
    eval_cmd->add_option("--data", ev.data, "Dataset directory");
    eval_cmd->add_option("--model", ev.model_path, "Model checkpoint");
    eval_cmd->add_option("--correct", ev.correct, "Arithmetic mode: number correct");
    eval_cmd->add_option("--n", ev.n, "Arithmetic mode: number of cases");
    eval_cmd->add_option("--p0", ev.p0, "Null success probability");
    eval_cmd->add_option("--split", ev.split, "none | auto | sequential | every_fifth | ...");
    eval_cmd->add_option("--train-fraction", ev.train_fraction, "Train fraction (custom split)");
    eval_cmd->add_option("--split-seed", ev.split_seed, "Seed for shuffled/custom splits");

    AuditArgs au;
    CLI::App* audit_cmd = app.add_subcommand("audit", "Quantify label leakage in a dataset");
    add_global_flags(audit_cmd, au.global);
    audit_cmd->add_option("--data", au.data, "Dataset directory");
    audit_cmd->add_option("--split", au.split, "auto | sequential | every_fifth | shuffled | custom");
    audit_cmd->add_option("--train-fraction", au.train_fraction, "Train fraction (custom split)");
    audit_cmd->add_option("--split-seed", au.split_seed, "Seed for shuffled/custom splits");
    audit_cmd->add_option("--classifier", au.classifier,
                          "parity_oracle | majority | logistic_parity");
    audit_cmd->add_option("--n-perm", au.n_perm, "Permutation count (>= 19)");
    audit_cmd->add_flag("--no-perm", au.no_permutation, "Skip the permutation test");
    audit_cmd->add_flag("--honest-relabel", au.honest_relabel,
                        "Audit an honestly relabeled copy of the dataset");
    audit_cmd->add_option("--relabel-seed", au.relabel_seed, "Seed for --honest-relabel");
    audit_cmd->add_flag("--fail-on-leak", au.fail_on_leak, "Exit 3 when PARITY_LEAK is found");
    audit_cmd->add_flag("--compare-claim-splits", au.compare_claim_splits,
                        "Also report train/test overlap between the two splits of the audited protocol");

    LotteryArgs lo;
    CLI::App* lottery_cmd =
        app.add_subcommand("lottery", "Probability arithmetic of the bit-combination scheme");
    add_global_flags(lottery_cmd, lo.global);
    lottery_cmd->add_option("--p", lo.p_bit, "Per-bit accuracy in (0, 1]");
    lottery_cmd->add_flag("--simulate", lo.simulate, "Monte Carlo jackpot estimate");
    lottery_cmd->add_option("--trials", lo.trials, "Monte Carlo trials");
    lottery_cmd->add_flag("--enumerate-range", lo.enumerate_range,
                          "Enumerate the combiner's reachable values");

    ReproArgs re;
    CLI::App* repro_cmd =
        app.add_subcommand("repro", "One-shot pipeline: simulate, train, audit, compare");
    add_global_flags(repro_cmd, re.global);
    repro_cmd->add_option("--rounds", re.rounds, "Number of rounds");
    repro_cmd->add_option("--k,--k-change", re.k_change, "Cells toggled per round");
    repro_cmd->add_option("--mode", re.mode, "distinct | with_replacement");
    repro_cmd->add_flag("--write-dataset", re.write_dataset, "Also export the dataset");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*generate) {
            file_config.apply(*generate, "--seed", "seed", gen.global.seed);
            file_config.apply(*generate, "--out", "out", gen.global.out);
            file_config.apply(*generate, "--rounds", "rounds", gen.rounds);
            file_config.apply(*generate, "--k", "k_change", gen.k_change);
            file_config.apply(*generate, "--width", "width", gen.width);
            file_config.apply(*generate, "--height", "height", gen.height);
            file_config.apply(*generate, "--mode", "mode", gen.mode);
            file_config.apply(*generate, "--tea-fraction", "tea_fraction", gen.tea_fraction);
            file_config.apply(*generate, "--blobs", "blob_count", gen.blob_count);
            gen.base_seed_set = base_seed_opt->count() > 0;
            return run_generate(gen);
        }
        if (*train_cmd) {
            file_config.apply(*train_cmd, "--seed", "seed", tr.global.seed);
            file_config.apply(*train_cmd, "--out", "out", tr.global.out);
            file_config.apply(*train_cmd, "--data", "data", tr.data);
            file_config.apply(*train_cmd, "--model", "model", tr.model_kind);
            file_config.apply(*train_cmd, "--hidden", "hidden", tr.hidden);
            file_config.apply(*train_cmd, "--features", "features", tr.features);
            file_config.apply(*train_cmd, "--loss", "loss", tr.loss);
            file_config.apply(*train_cmd, "--lr", "learning_rate", tr.learning_rate);
            file_config.apply(*train_cmd, "--epochs", "epochs", tr.epochs);
            file_config.apply(*train_cmd, "--batch", "batch_size", tr.batch_size);
            file_config.apply(*train_cmd, "--split", "split", tr.split);
            file_config.apply(*train_cmd, "--train-fraction", "train_fraction", tr.train_fraction);
            file_config.apply(*train_cmd, "--split-seed", "split_seed", tr.split_seed);
            return run_train(tr);
        }
        if (*eval_cmd) {
            file_config.apply(*eval_cmd, "--seed", "seed", ev.global.seed);
            file_config.apply(*eval_cmd, "--data", "data", ev.data);
            file_config.apply(*eval_cmd, "--model", "model", ev.model_path);
            file_config.apply(*eval_cmd, "--p0", "p0", ev.p0);
            return run_eval(ev);
        }
        if (*audit_cmd) {
            file_config.apply(*audit_cmd, "--seed", "seed", au.global.seed);
            file_config.apply(*audit_cmd, "--out", "out", au.global.out);
            file_config.apply(*audit_cmd, "--data", "data", au.data);
            file_config.apply(*audit_cmd, "--split", "split", au.split);
            file_config.apply(*audit_cmd, "--n-perm", "n_perm", au.n_perm);
            return run_audit(au);
        }
        if (*lottery_cmd) {
            file_config.apply(*lottery_cmd, "--seed", "seed", lo.global.seed);
            file_config.apply(*lottery_cmd, "--out", "out", lo.global.out);
            file_config.apply(*lottery_cmd, "--p", "p", lo.p_bit);
            file_config.apply(*lottery_cmd, "--trials", "trials", lo.trials);
            return run_lottery(lo);
        }
        if (*repro_cmd) {
            file_config.apply(*repro_cmd, "--seed", "seed", re.global.seed);
            file_config.apply(*repro_cmd, "--out", "out", re.global.out);
            file_config.apply(*repro_cmd, "--rounds", "rounds", re.rounds);
            file_config.apply(*repro_cmd, "--k", "k_change", re.k_change);
            return run_repro_cmd(re);
        }
    } catch (const tasselab::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const tasselab::data_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
    return kExitOk;
}
