#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tasselab/errors.hpp"

namespace tasselab {

// Coin flip outcome. Serialized everywhere as 1 = heads, 0 = tails.
enum class FlipOutcome : std::uint8_t { tails = 0, heads = 1 };

inline constexpr int to_int(FlipOutcome o) noexcept { return o == FlipOutcome::heads ? 1 : 0; }

inline constexpr FlipOutcome flip_from_int(int v) {
    if (v != 0 && v != 1) throw domain_error("flip outcome must be 0 (tails) or 1 (heads)");
    return v == 1 ? FlipOutcome::heads : FlipOutcome::tails;
}

// A binary tea-leaf reading: every cell is either tea (1) or cup (0).
// The tea-pixel count is maintained incrementally; its parity is the single
// quantity the rest of the pipeline ultimately hinges on.
class TeaImage {
public:
    TeaImage() = default;

    TeaImage(int width, int height)
        : width_(width), height_(height) {
        if (width <= 0 || height <= 0)
            throw domain_error("image dimensions must be positive");
        cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return cells_.size(); }

    bool tea_at(int x, int y) const { return cells_[index(x, y)] != 0; }
    bool tea_at(std::size_t idx) const { return cells_[idx] != 0; }

    void set(std::size_t idx, bool tea) {
        const std::uint8_t value = tea ? 1 : 0;
        if (cells_[idx] != value) {
            tea_count_ += tea ? 1 : -1;
            cells_[idx] = value;
        }
    }

    void set(int x, int y, bool tea) { set(index(x, y), tea); }

    void toggle(std::size_t idx) {
        tea_count_ += cells_[idx] ? -1 : 1;
        cells_[idx] ^= 1;
    }

    std::size_t tea_count() const noexcept { return static_cast<std::size_t>(tea_count_); }
    int parity() const noexcept { return static_cast<int>(tea_count_ & 1); }

    const std::vector<std::uint8_t>& cells() const noexcept { return cells_; }

    friend bool operator==(const TeaImage& a, const TeaImage& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.cells_ == b.cells_;
    }

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::int64_t tea_count_ = 0;
    std::vector<std::uint8_t> cells_;  // row-major, 1 = tea, 0 = cup
};

inline std::size_t hamming_distance(const TeaImage& a, const TeaImage& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw domain_error("hamming_distance: image dimensions differ");
    std::size_t differing = 0;
    for (std::size_t i = 0; i < a.size(); ++i) differing += a.cells()[i] != b.cells()[i];
    return differing;
}

}  // namespace tasselab
