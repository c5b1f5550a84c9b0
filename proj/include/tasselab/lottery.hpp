#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tasselab/errors.hpp"
#include "tasselab/rng.hpp"
#include "tasselab/stats.hpp"

// The bit-combination lottery scheme under audit: ten 1-bit predictors feed
//
//   win_i = <b1..b5>_2 + <b6..b9>_2 + <b10>_2
//
// so the reachable values are 0..47 (31 + 15 + 1): the pool numbers 48 and
// 49 can never be produced, and 0 (not in the pool) is produced by exactly
// one bit pattern. The report reproduces the claimed probability arithmetic
// and sets it against the actual jackpot chance.

namespace tasselab {

inline constexpr int kLotteryPoolMax = 49;
inline constexpr int kLotteryDrawSize = 6;
inline constexpr int kCombinerBits = 10;
inline constexpr int kCombinerMaxValue = 47;

// Big-endian positional value of a bit string: sum of b_i * 2^(n-i).
inline std::uint64_t encode_bits(const std::vector<int>& bits) {
    if (bits.empty()) throw domain_error("encode_bits: empty bit vector");
    if (bits.size() > 64) throw domain_error("encode_bits: more than 64 bits");
    std::uint64_t value = 0;
    for (const int b : bits) {
        if (b != 0 && b != 1) throw domain_error("encode_bits: entries must be 0 or 1");
        value = (value << 1) | static_cast<std::uint64_t>(b);
    }
    return value;
}

struct CombineResult {
    int value = 0;
    bool valid = false;  // value lies in the pool 1..49
};

// The ten-bit combiner: 5 + 4 + 1 bits, summed.
inline CombineResult combine_win(const std::vector<int>& bits) {
    if (bits.size() != kCombinerBits)
        throw domain_error("combine_win: need exactly 10 bits, got " +
                           std::to_string(bits.size()));
    const auto a = encode_bits({bits.begin(), bits.begin() + 5});
    const auto b = encode_bits({bits.begin() + 5, bits.begin() + 9});
    const auto c = encode_bits({bits.begin() + 9, bits.end()});
    const int value = static_cast<int>(a + b + c);
    return {value, value >= 1 && value <= kLotteryPoolMax};
}

struct Decomposition {
    int a = 0;  // 0..31
    int b = 0;  // 0..15
    int c = 0;  // 0..1
};

// Canonical greedy split of a target t into the combiner's three summands.
// Decompositions are not unique (17 = 16+1+0 = 17+0+0); this fixed greedy
// rule defines which bit pattern counts as "the" encoding of t.
inline Decomposition decompose_number(int t) {
    if (t < 0 || t > kCombinerMaxValue)
        throw unrepresentable_error("decompose_number: " + std::to_string(t) +
                                    " is outside the reachable range [0, 47]");
    Decomposition d;
    d.a = std::min(t, 31);
    d.b = std::min(t - d.a, 15);
    d.c = t - d.a - d.b;
    return d;
}

// Ten-bit pattern (5+4+1, big-endian per group) of a canonical decomposition.
inline std::array<int, kCombinerBits> bits_of(const Decomposition& d) {
    std::array<int, kCombinerBits> bits{};
    for (int i = 0; i < 5; ++i) bits[static_cast<std::size_t>(i)] = (d.a >> (4 - i)) & 1;
    for (int i = 0; i < 4; ++i) bits[static_cast<std::size_t>(5 + i)] = (d.b >> (3 - i)) & 1;
    bits[9] = d.c & 1;
    return bits;
}

// Exhaustive image of the combiner over all 1024 ten-bit patterns.
inline std::set<int> enumerate_reachable() {
    std::set<int> values;
    for (int pattern = 0; pattern < 1024; ++pattern) {
        std::vector<int> bits(kCombinerBits);
        for (int i = 0; i < kCombinerBits; ++i) bits[static_cast<std::size_t>(i)] = (pattern >> (9 - i)) & 1;
        values.insert(combine_win(bits).value);
    }
    return values;
}

using BitSource = std::function<std::vector<int>()>;  // yields 10 bits per round

struct LotteryDraw {
    std::array<int, kLotteryDrawSize> numbers{};
    int rounds_used = 0;
};

// Runs the prediction protocol: one round per candidate number, discarding
// values outside the pool and repeats of already-accepted numbers, until six
// distinct pool numbers are collected. Every round stands for a fresh cup of
// tea (ten fresh 1-bit readings).
inline LotteryDraw draw_prediction(const BitSource& bit_source, int max_rounds = 1000) {
    if (max_rounds < kLotteryDrawSize)
        throw domain_error("draw_prediction: max_rounds must be >= 6");

    LotteryDraw draw;
    std::vector<int> accepted;
    while (static_cast<int>(accepted.size()) < kLotteryDrawSize) {
        if (draw.rounds_used >= max_rounds)
            throw draw_exhausted_error(
                "draw_prediction: exhausted " + std::to_string(max_rounds) +
                    " rounds with " + std::to_string(accepted.size()) + " of 6 numbers collected",
                accepted, draw.rounds_used);
        ++draw.rounds_used;
        const CombineResult candidate = combine_win(bit_source());
        if (!candidate.valid) continue;
        if (std::find(accepted.begin(), accepted.end(), candidate.value) != accepted.end())
            continue;
        accepted.push_back(candidate.value);
    }
    std::copy(accepted.begin(), accepted.end(), draw.numbers.begin());
    return draw;
}

struct McEstimate {
    double estimate = 0.0;
    Interval ci;  // Wilson, 95%
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
};

// Corrected jackpot analysis by simulation. Per trial: draw a true winning
// set of 6 distinct uniform numbers, predict each of its numbers through the
// combiner with every bit of the canonical encoding flipped independently
// with probability 1 - p_bit, apply the discard-and-redraw rule; success
// means the predicted set equals the true set. True numbers are drawn from
// the representable pool 1..47: targets 48 and 49 have no bit encoding at
// all (surfaced in the range diagnostics), so "correct bits" is undefined
// for them and perfect bits could never reconstruct such a draw. Trial t
// draws from derive_seed(seed, t), so any chunking gives the same result.
inline McEstimate monte_carlo_jackpot(double p_bit, std::uint64_t trials, std::uint64_t seed,
                                      int max_rounds_per_draw = 1000) {
    if (!(p_bit > 0.0) || p_bit > 1.0)
        throw domain_error("monte_carlo_jackpot: p_bit must lie in (0, 1]");
    if (trials < 1) throw domain_error("monte_carlo_jackpot: trials must be >= 1");

    McEstimate mc;
    mc.trials = trials;

    std::vector<int> predicted;
    predicted.reserve(kLotteryDrawSize);

    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        Xoshiro256ss rng(derive_seed(seed, trial));

        // True winning set: 6 distinct uniform numbers from the representable
        // pool 1..47.
        std::array<int, kLotteryDrawSize> truth{};
        std::array<int, kCombinerMaxValue> pool{};
        std::iota(pool.begin(), pool.end(), 1);
        for (int i = 0; i < kLotteryDrawSize; ++i) {
            const auto j = i + static_cast<int>(
                                   rng.below(static_cast<std::uint64_t>(kCombinerMaxValue - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
            truth[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(i)];
        }

        // The protocol, with the current lottery number as the reading target:
        // a rejected round repeats for the same target, an accepted number
        // advances to the next one.
        predicted.clear();
        int rounds = 0;
        while (static_cast<int>(predicted.size()) < kLotteryDrawSize &&
               rounds < max_rounds_per_draw) {
            ++rounds;
            const int target = truth[predicted.size()];
            std::array<int, kCombinerBits> bits = bits_of(decompose_number(target));
            std::vector<int> noisy(bits.begin(), bits.end());
            for (auto& b : noisy)
                if (!rng.bernoulli(p_bit)) b ^= 1;  // bit read incorrectly
            const CombineResult candidate = combine_win(noisy);
            if (!candidate.valid) continue;
            if (std::find(predicted.begin(), predicted.end(), candidate.value) != predicted.end())
                continue;
            predicted.push_back(candidate.value);
        }

        if (static_cast<int>(predicted.size()) == kLotteryDrawSize) {
            std::array<int, kLotteryDrawSize> sorted_truth = truth;
            std::array<int, kLotteryDrawSize> sorted_predicted{};
            std::copy(predicted.begin(), predicted.end(), sorted_predicted.begin());
            std::sort(sorted_truth.begin(), sorted_truth.end());
            std::sort(sorted_predicted.begin(), sorted_predicted.end());
            if (sorted_truth == sorted_predicted) ++mc.successes;
        }
    }

    mc.estimate = static_cast<double>(mc.successes) / static_cast<double>(mc.trials);
    mc.ci = wilson_ci(static_cast<std::int64_t>(mc.successes), static_cast<std::int64_t>(mc.trials));
    return mc;
}

struct ProbabilityReport {
    double p_bit = 0.0;
    double p_win_claimed = 0.0;      // p_bit^10: the claimed "jackpot" chance
    double p_chance = 0.0;         // 1 / C(49,6)
    double p_all_six_bits = 0.0;   // p_bit^60: all six numbers' bits correct
    std::uint64_t pool_combinations = 0;  // C(49,6)
    int encoding_min = 0;
    int encoding_max = 0;
    std::set<int> unreachable_pool_values;
    bool claim_beats_chance = false;       // p_win_claimed > p_chance (the claim)
    bool corrected_beats_chance = false;   // p_all_six_bits > p_chance (the reality)
    std::optional<McEstimate> mc;

    nlohmann::ordered_json to_json() const;
    std::string to_text() const;
};

// Reproduces the claimed probability arithmetic and corrects it. p_bit^10 is
// the chance of getting one number's ten bits right, not of winning the
// jackpot; requiring all six numbers (p_bit^60) lands below uniform chance.
inline ProbabilityReport probability_report(double p_bit) {
    if (!(p_bit > 0.0) || p_bit > 1.0)
        throw domain_error("probability_report: p_bit must lie in (0, 1]");

    ProbabilityReport report;
    report.p_bit = p_bit;
    report.p_win_claimed = std::pow(p_bit, 10.0);
    report.pool_combinations = binomial_coefficient(kLotteryPoolMax, kLotteryDrawSize);
    report.p_chance = 1.0 / static_cast<double>(report.pool_combinations);
    report.p_all_six_bits = std::pow(p_bit, 60.0);

    const std::set<int> reachable = enumerate_reachable();
    report.encoding_min = *reachable.begin();
    report.encoding_max = *reachable.rbegin();
    for (int v = 1; v <= kLotteryPoolMax; ++v)
        if (!reachable.count(v)) report.unreachable_pool_values.insert(v);

    report.claim_beats_chance = report.p_win_claimed > report.p_chance;
    report.corrected_beats_chance = report.p_all_six_bits > report.p_chance;
    return report;
}

inline nlohmann::ordered_json ProbabilityReport::to_json() const {
    nlohmann::ordered_json j;
    j["p_bit"] = p_bit;
    j["p_win_claimed"] = p_win_claimed;
    j["p_chance"] = p_chance;
    j["pool_combinations"] = pool_combinations;
    j["p_all_six_bits"] = p_all_six_bits;
    j["encoding_range"] = {encoding_min, encoding_max};
    j["unreachable_pool_values"] = unreachable_pool_values;
    j["claim_beats_chance"] = claim_beats_chance;
    j["corrected_beats_chance"] = corrected_beats_chance;
    if (mc) {
        j["mc_estimate"] = {{"estimate", mc->estimate},
                            {"ci95", {mc->ci.lo, mc->ci.hi}},
                            {"successes", mc->successes},
                            {"trials", mc->trials}};
    }
    return j;
}

inline std::string ProbabilityReport::to_text() const {
    std::ostringstream out;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.8f", p_win_claimed);
    out << "per-bit accuracy p = " << p_bit << "\n";
    out << "claimed jackpot chance   p^10        = " << buf << "   (chance of ONE number's ten bits)\n";
    std::snprintf(buf, sizeof(buf), "%.6g", p_chance);
    out << "uniform jackpot chance   1/C(49,6)   = " << buf << "   (C(49,6) = " << pool_combinations
        << ")\n";
    std::snprintf(buf, sizeof(buf), "%.6g", p_all_six_bits);
    out << "corrected: all 60 bits   p^60        = " << buf << "\n";
    out << "verdict: p^60 " << (corrected_beats_chance ? ">" : "<")
        << " 1/C(49,6) -- the scheme "
        << (corrected_beats_chance ? "would beat" : "does NOT beat") << " uniform ticket buying\n";
    out << "encoding range of the 10-bit combiner: [" << encoding_min << ", " << encoding_max
        << "]; unreachable pool numbers:";
    for (const int v : unreachable_pool_values) out << " " << v;
    out << "\n";
    if (mc) {
        std::snprintf(buf, sizeof(buf), "%.3g [%.3g, %.3g]", mc->estimate, mc->ci.lo, mc->ci.hi);
        out << "monte carlo jackpot estimate: " << buf << " (" << mc->successes << "/"
            << mc->trials << " trials; true sets drawn from the representable 1..47)\n";
    }
    return out.str();
}

}  // namespace tasselab
