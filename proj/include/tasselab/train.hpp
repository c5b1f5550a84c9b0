#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "tasselab/errors.hpp"
#include "tasselab/loss.hpp"
#include "tasselab/model.hpp"
#include "tasselab/rng.hpp"

namespace tasselab {

struct TrainConfig {
    LossKind loss = LossKind::cross_entropy;
    double learning_rate = 0.1;
    int epochs = 200;
    int batch_size = 32;
    std::uint64_t seed = 7;

    void validate() const {
        if (learning_rate <= 0.0) throw domain_error("train: learning_rate must be > 0");
        if (epochs < 0) throw domain_error("train: epochs must be >= 0");
        if (batch_size < 1) throw domain_error("train: batch_size must be >= 1");
    }
};

struct TrainResult {
    ModelState model;
    std::vector<double> history;  // mean loss per epoch
};

namespace detail {

// Plain mini-batch SGD over prebuilt (features, target) pairs. One shuffle of
// the example order per epoch, drawn from a single seeded stream, so a fixed
// seed reproduces training bit-for-bit.
inline TrainResult sgd(ModelState model, const std::vector<std::vector<double>>& features,
                       const std::vector<double>& targets, const TrainConfig& cfg) {
    cfg.validate();
    const std::size_t n = features.size();
    for (const auto& x : features)
        if (x.size() != model.input_dim())
            throw domain_error("train: feature dimension does not match model");

    TrainResult result{std::move(model), {}};
    result.history.reserve(static_cast<std::size_t>(cfg.epochs));
    if (n == 0 || cfg.epochs == 0) {
        result.history.assign(static_cast<std::size_t>(cfg.epochs), 0.0);
        return result;
    }

    Xoshiro256ss rng(cfg.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    Gradients grads(result.model);
    std::vector<double> hidden;
    const auto batch = static_cast<std::size_t>(cfg.batch_size);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle(order, rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t end = std::min(start + batch, n);
            grads.zero();
            for (std::size_t b = start; b < end; ++b) {
                const std::size_t i = order[b];
                const double y = forward(result.model, features[i], &hidden);
                const LossValue lv = loss_and_grad(cfg.loss, y, targets[i]);
                epoch_loss += lv.loss;
                accumulate_gradient(result.model, features[i], hidden, y, lv.dloss_dy, grads);
            }
            const double step = cfg.learning_rate / static_cast<double>(end - start);
            ModelState& m = result.model;
            for (std::size_t i = 0; i < m.w1.size(); ++i) m.w1[i] -= step * grads.w1[i];
            for (std::size_t i = 0; i < m.b1.size(); ++i) m.b1[i] -= step * grads.b1[i];
            for (std::size_t i = 0; i < m.w2.size(); ++i) m.w2[i] -= step * grads.w2[i];
            m.b2 -= step * grads.b2;
        }
        result.history.push_back(epoch_loss / static_cast<double>(n));
    }
    return result;
}

}  // namespace detail

inline TrainResult train(const ModelState& model, const Dataset& train_set,
                         const TrainConfig& cfg) {
    std::vector<std::vector<double>> features;
    std::vector<double> targets;
    features.reserve(train_set.size());
    targets.reserve(train_set.size());
    for (const auto& rec : train_set.records) {
        if (rec.image.width() != model.width || rec.image.height() != model.height)
            throw domain_error("train: dataset image dimensions do not match model");
        features.push_back(featurize(rec.image, model.scheme));
        targets.push_back(static_cast<double>(to_int(rec.label)));
    }
    return detail::sgd(model, features, targets, cfg);
}

// A deterministic bitmap of the classic slightly-smiling face: circle
// outline, two eyes, smile arc. Rendered in tea pixels on a cup background.
inline TeaImage render_smiley(int width, int height) {
    TeaImage img(width, height);
    const double cx = (width - 1) / 2.0;
    const double cy = (height - 1) / 2.0;
    const double radius = 0.45 * std::min(width, height);
    const double stroke = std::max(0.5, radius / 8.0);

    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            const double dist = std::sqrt(dx * dx + dy * dy);
            bool tea = std::abs(dist - radius) <= stroke;  // face outline
            // eyes
            const double ex = 0.35 * radius;
            const double ey = -0.30 * radius;
            const double eye_r = std::max(0.75, radius / 7.0);
            if (std::hypot(dx - ex, dy - ey) <= eye_r) tea = true;
            if (std::hypot(dx + ex, dy - ey) <= eye_r) tea = true;
            // smile: lower arc of a concentric circle
            if (std::abs(dist - 0.55 * radius) <= stroke && dy > 0.25 * radius) tea = true;
            if (tea) img.set(x, y, true);
        }
    }
    return img;
}

// The "smileyfication" procedure: present smiley_count smiley images and
// train under the smiley loss, whose target is defined to be the model's own
// output. The gradient is identically zero, so the returned parameters are
// bit-for-bit the input parameters; the recorded losses are all exactly 0.
inline TrainResult smileyfy(const ModelState& model, int smiley_count, TrainConfig cfg) {
    if (smiley_count < 0) throw domain_error("smileyfy: smiley_count must be >= 0");
    cfg.loss = LossKind::smiley;

    const TeaImage smiley = render_smiley(model.width, model.height);
    const std::vector<double> x = featurize(smiley, model.scheme);
    std::vector<std::vector<double>> features(static_cast<std::size_t>(smiley_count), x);
    // Targets are placeholders; the smiley loss substitutes the model output.
    std::vector<double> targets(static_cast<std::size_t>(smiley_count), 1.0);
    return detail::sgd(model, features, targets, cfg);
}

}  // namespace tasselab
