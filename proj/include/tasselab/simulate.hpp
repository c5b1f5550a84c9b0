#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "tasselab/errors.hpp"
#include "tasselab/image.hpp"
#include "tasselab/rng.hpp"
#include "tasselab/sha256.hpp"

namespace tasselab {

// Outcome of the deterministic "flip" in round r: the coin starts tails up
// at r = 0 and is turned once per round, so it shows heads in every odd
// round. Round 0 is the initialization state and has no outcome.
inline FlipOutcome coin_outcome(std::int64_t round) {
    if (round < 1) throw domain_error("coin_outcome: round index must be >= 1");
    return (round + 1) % 2 == 0 ? FlipOutcome::heads : FlipOutcome::tails;
}

// How the k_change coordinates of a round are sampled.
enum class SamplingMode : std::uint8_t { distinct = 0, with_replacement = 1 };

inline const char* to_string(SamplingMode mode) noexcept {
    return mode == SamplingMode::distinct ? "distinct" : "with_replacement";
}

inline SamplingMode sampling_mode_from_string(const std::string& s) {
    if (s == "distinct") return SamplingMode::distinct;
    if (s == "with_replacement") return SamplingMode::with_replacement;
    throw domain_error("unknown sampling mode '" + s + "' (distinct | with_replacement)");
}

// Recipe for the synthetic base reading I_0: seeded blobs of tea pixels at a
// target density. blob_count = 0 scatters pixels uniformly instead.
struct BaseImageSpec {
    double tea_fraction = 0.3;
    int blob_count = 12;
    std::uint64_t seed = 1;
};

struct SimConfig {
    int width = 100;
    int height = 100;
    int k_change = 7;
    SamplingMode mode = SamplingMode::distinct;
    int rounds = 500;
    BaseImageSpec base;
    std::uint64_t seed = 42;

    std::int64_t cell_count() const noexcept {
        return static_cast<std::int64_t>(width) * height;
    }

    void validate() const {
        if (width <= 0 || height <= 0)
            throw domain_error("config: width and height must be positive");
        if (k_change < 1 || k_change > cell_count())
            throw domain_error("config: k_change must lie in [1, width*height] = [1, " +
                               std::to_string(cell_count()) + "]");
        if (rounds < 0) throw domain_error("config: rounds must be >= 0");
        if (base.tea_fraction < 0.0 || base.tea_fraction > 1.0)
            throw domain_error("config: tea_fraction must lie in [0, 1]");
        if (base.blob_count < 0) throw domain_error("config: blob_count must be >= 0");
    }
};

// Canonical serialization of a SimConfig; its SHA-256 is the dataset's
// provenance hash. Field order and float formatting (%.17g) are fixed.
inline std::string canonical_config_string(const SimConfig& cfg) {
    char frac[64];
    std::snprintf(frac, sizeof(frac), "%.17g", cfg.base.tea_fraction);
    std::string s = "tasselab.simconfig.v1\n";
    s += "width=" + std::to_string(cfg.width) + "\n";
    s += "height=" + std::to_string(cfg.height) + "\n";
    s += "k_change=" + std::to_string(cfg.k_change) + "\n";
    s += "sampling_mode=" + std::string(to_string(cfg.mode)) + "\n";
    s += "rounds=" + std::to_string(cfg.rounds) + "\n";
    s += "tea_fraction=" + std::string(frac) + "\n";
    s += "blob_count=" + std::to_string(cfg.base.blob_count) + "\n";
    s += "base_seed=" + std::to_string(cfg.base.seed) + "\n";
    s += "seed=" + std::to_string(cfg.seed) + "\n";
    return s;
}

inline std::string provenance_hash(const SimConfig& cfg) {
    return sha256_hex(canonical_config_string(cfg));
}

// Synthesizes I_0: exactly round(tea_fraction * W * H) tea pixels, grown as
// blob_count random walks (or scattered uniformly when blob_count = 0).
inline TeaImage synthesize_base_image(const BaseImageSpec& spec, int width, int height) {
    if (width <= 0 || height <= 0)
        throw domain_error("synthesize_base_image: zero-area image");
    if (spec.tea_fraction < 0.0 || spec.tea_fraction > 1.0)
        throw domain_error("synthesize_base_image: tea_fraction must lie in [0, 1]");

    TeaImage img(width, height);
    const std::size_t cells = img.size();
    const auto target =
        static_cast<std::size_t>(spec.tea_fraction * static_cast<double>(cells) + 0.5);
    if (target == 0) return img;

    Xoshiro256ss rng(spec.seed);
    if (spec.blob_count == 0) {
        while (img.tea_count() < target) img.set(rng.below(cells), true);
        return img;
    }

    const std::size_t per_blob = (target + spec.blob_count - 1) / spec.blob_count;
    for (int b = 0; b < spec.blob_count && img.tea_count() < target; ++b) {
        int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(width)));
        int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(height)));
        std::size_t grown = 0;
        std::size_t steps = 0;
        const std::size_t step_limit = 64 * cells;
        while (grown < per_blob && img.tea_count() < target && steps++ < step_limit) {
            if (!img.tea_at(x, y)) {
                img.set(x, y, true);
                ++grown;
            }
            switch (rng.below(4)) {
                case 0: x = std::min(x + 1, width - 1); break;
                case 1: x = std::max(x - 1, 0); break;
                case 2: y = std::min(y + 1, height - 1); break;
                default: y = std::max(y - 1, 0); break;
            }
        }
    }
    // Random walks may stall inside saturated regions; top up uniformly.
    while (img.tea_count() < target) img.set(rng.below(cells), true);
    return img;
}

// One simulation step: toggle k_change cells of the previous reading.
// distinct mode toggles exactly k_change different cells; with_replacement
// draws coordinates independently, so a cell drawn twice toggles back.
// Either way the tea-count parity advances by k_change mod 2.
inline TeaImage next_image(const TeaImage& prev, const SimConfig& cfg, Xoshiro256ss& rng) {
    if (prev.width() != cfg.width || prev.height() != cfg.height)
        throw domain_error("next_image: image dimensions do not match config");
    const std::size_t cells = prev.size();
    if (cfg.k_change < 1) throw domain_error("next_image: k_change must be >= 1");

    TeaImage img = prev;
    if (cfg.mode == SamplingMode::with_replacement) {
        for (int j = 0; j < cfg.k_change; ++j) img.toggle(rng.below(cells));
        return img;
    }

    if (static_cast<std::size_t>(cfg.k_change) > cells)
        throw domain_error("next_image: k_change exceeds cell count in distinct mode");
    // Partial Fisher-Yates over the cell indices picks k_change distinct cells.
    std::vector<std::uint32_t> indices(cells);
    std::iota(indices.begin(), indices.end(), 0u);
    for (int j = 0; j < cfg.k_change; ++j) {
        const std::size_t pick = j + static_cast<std::size_t>(rng.below(cells - j));
        std::swap(indices[j], indices[pick]);
        img.toggle(indices[j]);
    }
    return img;
}

struct DatasetRecord {
    int round = 0;
    TeaImage image;
    FlipOutcome label = FlipOutcome::tails;
};

// Ordered simulation output: records (r, I_r, o_flip(r)) for r = 1..rounds,
// plus the base reading I_0 and the generating config. `relabeled` marks
// datasets whose labels were replaced by honest coin flips.
struct Dataset {
    std::vector<DatasetRecord> records;
    SimConfig config;
    TeaImage base_image;
    std::string provenance;
    bool relabeled = false;

    std::size_t size() const noexcept { return records.size(); }
};

inline Dataset generate_dataset(const SimConfig& cfg) {
    cfg.validate();
    Dataset ds;
    ds.config = cfg;
    ds.base_image = synthesize_base_image(cfg.base, cfg.width, cfg.height);
    ds.provenance = provenance_hash(cfg);
    ds.records.reserve(static_cast<std::size_t>(cfg.rounds));

    Xoshiro256ss rng(cfg.seed);
    TeaImage current = ds.base_image;
    for (int r = 1; r <= cfg.rounds; ++r) {
        current = next_image(current, cfg, rng);
        ds.records.push_back({r, current, coin_outcome(r)});
    }
    return ds;
}

struct SplitStrategy {
    enum class Kind : std::uint8_t { sequential_300_200, every_fifth, shuffled, custom };

    Kind kind = Kind::sequential_300_200;
    double train_fraction = 0.6;  // shuffled / custom
    std::uint64_t seed = 0;       // shuffled / custom

    static SplitStrategy sequential() { return {Kind::sequential_300_200, 0.6, 0}; }
    static SplitStrategy every_fifth() { return {Kind::every_fifth, 0.2, 0}; }
    static SplitStrategy shuffled(std::uint64_t seed) { return {Kind::shuffled, 0.6, seed}; }
    static SplitStrategy custom(double train_fraction, std::uint64_t seed) {
        return {Kind::custom, train_fraction, seed};
    }

    std::string name() const {
        switch (kind) {
            case Kind::sequential_300_200: return "sequential_300_200";
            case Kind::every_fifth: return "every_fifth";
            case Kind::shuffled: return "shuffled";
            default: return "custom";
        }
    }
};

inline SplitStrategy split_strategy_from_string(const std::string& s, double fraction,
                                                std::uint64_t seed) {
    if (s == "sequential" || s == "sequential_300_200") return SplitStrategy::sequential();
    if (s == "every_fifth" || s == "every5") return SplitStrategy::every_fifth();
    if (s == "shuffled") return SplitStrategy::shuffled(seed);
    if (s == "custom") return SplitStrategy::custom(fraction, seed);
    throw domain_error("unknown split strategy '" + s +
                       "' (sequential | every_fifth | shuffled | custom)");
}

// Splits into disjoint train/test parts whose union is the input. Parts keep
// record order by round. every_fifth puts rounds with r mod 5 = 1 into the
// training part; shuffled/custom select a random subset of the given size.
inline std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, const SplitStrategy& strategy) {
    const std::size_t n = ds.size();
    std::vector<std::size_t> train_idx;

    switch (strategy.kind) {
        case SplitStrategy::Kind::sequential_300_200: {
            if (n != 500)
                throw domain_error("split sequential_300_200 requires exactly 500 records, got " +
                                   std::to_string(n));
            train_idx.resize(300);
            std::iota(train_idx.begin(), train_idx.end(), std::size_t{0});
            break;
        }
        case SplitStrategy::Kind::every_fifth: {
            for (std::size_t i = 0; i < n; ++i)
                if (ds.records[i].round % 5 == 1) train_idx.push_back(i);
            break;
        }
        case SplitStrategy::Kind::shuffled:
        case SplitStrategy::Kind::custom: {
            if (strategy.train_fraction < 0.0 || strategy.train_fraction > 1.0)
                throw domain_error("split: train_fraction must lie in [0, 1]");
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), std::size_t{0});
            Xoshiro256ss rng(strategy.seed);
            shuffle(order, rng);
            const auto train_n =
                static_cast<std::size_t>(strategy.train_fraction * static_cast<double>(n) + 0.5);
            train_idx.assign(order.begin(), order.begin() + train_n);
            std::sort(train_idx.begin(), train_idx.end());
            break;
        }
    }

    std::vector<char> in_train(n, 0);
    for (const std::size_t i : train_idx) in_train[i] = 1;

    auto make_part = [&](bool want_train) {
        Dataset part;
        part.config = ds.config;
        part.base_image = ds.base_image;
        part.provenance = ds.provenance;
        part.relabeled = ds.relabeled;
        for (std::size_t i = 0; i < n; ++i)
            if (static_cast<bool>(in_train[i]) == want_train) part.records.push_back(ds.records[i]);
        return part;
    };
    return {make_part(true), make_part(false)};
}

}  // namespace tasselab
