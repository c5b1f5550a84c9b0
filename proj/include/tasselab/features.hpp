#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tasselab/errors.hpp"
#include "tasselab/image.hpp"

namespace tasselab {

// What a classifier sees of a reading. raw feeds the flattened pixels;
// count and parity are the engineered features that expose the label leak.
enum class FeatureScheme : std::uint8_t {
    raw = 0,           // W*H pixels as 0/1 values
    count = 1,         // tea_count / (W*H)
    parity = 2,        // tea_count mod 2
    count_parity = 3,  // both of the above
};

inline const char* to_string(FeatureScheme scheme) noexcept {
    switch (scheme) {
        case FeatureScheme::raw: return "raw";
        case FeatureScheme::count: return "count";
        case FeatureScheme::parity: return "parity";
        default: return "count_parity";
    }
}

inline FeatureScheme feature_scheme_from_string(const std::string& s) {
    if (s == "raw") return FeatureScheme::raw;
    if (s == "count") return FeatureScheme::count;
    if (s == "parity") return FeatureScheme::parity;
    if (s == "count_parity") return FeatureScheme::count_parity;
    throw domain_error("unknown feature scheme '" + s + "' (raw | count | parity | count_parity)");
}

inline std::size_t feature_dim(FeatureScheme scheme, int width, int height) {
    switch (scheme) {
        case FeatureScheme::raw:
            return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
        case FeatureScheme::count:
        case FeatureScheme::parity: return 1;
        default: return 2;
    }
}

inline std::vector<double> featurize(const TeaImage& img, FeatureScheme scheme) {
    const double cells = static_cast<double>(img.size());
    switch (scheme) {
        case FeatureScheme::raw: {
            std::vector<double> out(img.size());
            for (std::size_t i = 0; i < img.size(); ++i) out[i] = img.cells()[i] ? 1.0 : 0.0;
            return out;
        }
        case FeatureScheme::count:
            return {static_cast<double>(img.tea_count()) / cells};
        case FeatureScheme::parity:
            return {static_cast<double>(img.parity())};
        default:
            return {static_cast<double>(img.tea_count()) / cells,
                    static_cast<double>(img.parity())};
    }
}

}  // namespace tasselab
