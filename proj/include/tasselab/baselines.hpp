#pragma once

#include <array>
#include <cstdint>

#include "tasselab/errors.hpp"
#include "tasselab/image.hpp"
#include "tasselab/model.hpp"
#include "tasselab/simulate.hpp"

namespace tasselab {

namespace detail {

// Majority vote with ties broken toward tails.
inline FlipOutcome majority_label(std::size_t tails, std::size_t heads) {
    return heads > tails ? FlipOutcome::heads : FlipOutcome::tails;
}

}  // namespace detail

// The exposé classifier: a 2-entry lookup from tea-count parity to the
// majority training label of that parity class. When k_change is odd this
// map is exact, which is the entire "psychic" effect.
class ParityOracle {
public:
    static ParityOracle fit(const Dataset& train_set) {
        if (train_set.records.empty()) throw domain_error("parity_oracle_fit: empty train set");
        std::array<std::array<std::size_t, 2>, 2> counts{};  // [parity][label]
        for (const auto& rec : train_set.records)
            ++counts[static_cast<std::size_t>(rec.image.parity())]
                    [static_cast<std::size_t>(to_int(rec.label))];

        ParityOracle oracle;
        const FlipOutcome overall = detail::majority_label(counts[0][0] + counts[1][0],
                                                           counts[0][1] + counts[1][1]);
        for (std::size_t parity = 0; parity < 2; ++parity) {
            const std::size_t seen = counts[parity][0] + counts[parity][1];
            oracle.map_[parity] = seen == 0
                                      ? overall  // unseen parity falls back to overall majority
                                      : detail::majority_label(counts[parity][0], counts[parity][1]);
        }
        return oracle;
    }

    FlipOutcome predict(const TeaImage& img) const {
        return map_[static_cast<std::size_t>(img.parity())];
    }

    Predictor predictor() const {
        return [self = *this](const TeaImage& img) { return self.predict(img); };
    }

private:
    std::array<FlipOutcome, 2> map_{FlipOutcome::tails, FlipOutcome::tails};
};

// Constant classifier predicting the most frequent training label (ties: tails).
class MajorityBaseline {
public:
    static MajorityBaseline fit(const Dataset& train_set) {
        if (train_set.records.empty()) throw domain_error("majority_baseline: empty train set");
        std::size_t tails = 0;
        std::size_t heads = 0;
        for (const auto& rec : train_set.records)
            (rec.label == FlipOutcome::heads ? heads : tails) += 1;
        MajorityBaseline baseline;
        baseline.label_ = detail::majority_label(tails, heads);
        return baseline;
    }

    FlipOutcome predict(const TeaImage&) const { return label_; }

    Predictor predictor() const {
        return [label = label_](const TeaImage&) { return label; };
    }

private:
    FlipOutcome label_ = FlipOutcome::tails;
};

}  // namespace tasselab
