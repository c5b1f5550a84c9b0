#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "tasselab/errors.hpp"

namespace tasselab {

enum class LossKind : std::uint8_t { cross_entropy = 0, squared = 1, smiley = 2 };

inline const char* to_string(LossKind kind) noexcept {
    switch (kind) {
        case LossKind::cross_entropy: return "cross_entropy";
        case LossKind::squared: return "squared";
        default: return "smiley";
    }
}

inline LossKind loss_kind_from_string(const std::string& s) {
    if (s == "cross_entropy") return LossKind::cross_entropy;
    if (s == "squared") return LossKind::squared;
    if (s == "smiley") return LossKind::smiley;
    throw domain_error("unknown loss '" + s + "' (cross_entropy | squared | smiley)");
}

struct LossValue {
    double loss = 0.0;
    double dloss_dy = 0.0;
};

// Loss and its derivative with respect to the model output y.
//
// squared:       L = (y - t)^2 / 2,     dL/dy = y - t
// cross_entropy: L = -t ln y - (1-t) ln(1-y), with y clamped 1e-12 from the
//                boundary,               dL/dy = (y - t) / (y (1-y))
// smiley:        the target is overridden with the output itself, so
//                L = (y - y)^2 / 2 = 0 and dL/dy = 0, identically. The "loss"
//                rewards the model for whatever it already does; nothing can
//                ever be learned from it.
inline LossValue loss_and_grad(LossKind kind, double y, double target) {
    if (!std::isfinite(y) || !std::isfinite(target))
        throw domain_error("loss_and_grad: non-finite input");

    switch (kind) {
        case LossKind::squared: {
            const double diff = y - target;
            return {0.5 * diff * diff, diff};
        }
        case LossKind::cross_entropy: {
            constexpr double eps = 1e-12;
            const double yc = std::clamp(y, eps, 1.0 - eps);
            const double loss = -(target * std::log(yc) + (1.0 - target) * std::log(1.0 - yc));
            const double grad = (yc - target) / (yc * (1.0 - yc));
            return {loss, grad};
        }
        default:
            return {0.0, 0.0};
    }
}

}  // namespace tasselab
