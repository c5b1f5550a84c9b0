#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "tasselab/errors.hpp"
#include "tasselab/features.hpp"
#include "tasselab/image.hpp"
#include "tasselab/rng.hpp"
#include "tasselab/simulate.hpp"

namespace tasselab {

enum class ModelKind : std::uint8_t { linear = 0, mlp = 1 };

inline const char* to_string(ModelKind kind) noexcept {
    return kind == ModelKind::linear ? "linear" : "mlp";
}

inline ModelKind model_kind_from_string(const std::string& s) {
    if (s == "linear") return ModelKind::linear;
    if (s == "mlp") return ModelKind::mlp;
    throw domain_error("unknown model kind '" + s + "' (linear | mlp)");
}

// Parameters of a from-scratch binary classifier bound to an image geometry
// and a feature scheme. The output layer (w2, b2) feeds a sigmoid; the mlp
// variant adds one tanh hidden layer (w1 row-major hidden x input, b1).
// For the linear variant w1/b1 are empty and w2 holds the input weights.
struct ModelState {
    ModelKind kind = ModelKind::linear;
    FeatureScheme scheme = FeatureScheme::parity;
    int width = 100;
    int height = 100;
    int hidden_width = 0;
    std::uint64_t init_seed = 0;

    std::vector<double> w1;
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;

    std::size_t input_dim() const { return feature_dim(scheme, width, height); }

    std::size_t param_count() const { return w1.size() + b1.size() + w2.size() + 1; }

    // Exact bit-for-bit parameter equality (stricter than ==, which -0.0 would pass).
    bool bit_identical_to(const ModelState& other) const {
        auto bits = [](double v) { return std::bit_cast<std::uint64_t>(v); };
        if (w1.size() != other.w1.size() || b1.size() != other.b1.size() ||
            w2.size() != other.w2.size())
            return false;
        for (std::size_t i = 0; i < w1.size(); ++i)
            if (bits(w1[i]) != bits(other.w1[i])) return false;
        for (std::size_t i = 0; i < b1.size(); ++i)
            if (bits(b1[i]) != bits(other.b1[i])) return false;
        for (std::size_t i = 0; i < w2.size(); ++i)
            if (bits(w2[i]) != bits(other.w2[i])) return false;
        return bits(b2) == bits(other.b2);
    }
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline ModelState init_model(ModelKind kind, FeatureScheme scheme, int width, int height,
                             int hidden_width, std::uint64_t seed) {
    if (width <= 0 || height <= 0) throw domain_error("init_model: bad image dimensions");
    ModelState m;
    m.kind = kind;
    m.scheme = scheme;
    m.width = width;
    m.height = height;
    m.init_seed = seed;
    const std::size_t in = m.input_dim();

    Xoshiro256ss rng(seed);
    if (kind == ModelKind::linear) {
        m.hidden_width = 0;
        m.w2.resize(in);
        const double scale = 1.0 / std::sqrt(static_cast<double>(in));
        for (auto& w : m.w2) w = rng.symmetric(scale);
        m.b2 = 0.0;
    } else {
        if (hidden_width < 1) throw domain_error("init_model: mlp needs hidden_width >= 1");
        m.hidden_width = hidden_width;
        const auto hidden = static_cast<std::size_t>(hidden_width);
        m.w1.resize(hidden * in);
        m.b1.assign(hidden, 0.0);
        m.w2.resize(hidden);
        const double scale1 = 1.0 / std::sqrt(static_cast<double>(in));
        for (auto& w : m.w1) w = rng.symmetric(scale1);
        const double scale2 = 1.0 / std::sqrt(static_cast<double>(hidden));
        for (auto& w : m.w2) w = rng.symmetric(scale2);
        m.b2 = 0.0;
    }
    return m;
}

// Forward pass; fills the hidden activation cache for the mlp variant.
inline double forward(const ModelState& m, const std::vector<double>& x,
                      std::vector<double>* hidden_cache = nullptr) {
    if (x.size() != m.input_dim())
        throw domain_error("forward: feature dimension " + std::to_string(x.size()) +
                           " does not match model input " + std::to_string(m.input_dim()));
    if (m.kind == ModelKind::linear) {
        double z = m.b2;
        for (std::size_t i = 0; i < x.size(); ++i) z += m.w2[i] * x[i];
        return sigmoid(z);
    }
    const auto hidden = static_cast<std::size_t>(m.hidden_width);
    std::vector<double> local;
    std::vector<double>& h = hidden_cache ? *hidden_cache : local;
    h.assign(hidden, 0.0);
    for (std::size_t j = 0; j < hidden; ++j) {
        double z = m.b1[j];
        const double* row = &m.w1[j * x.size()];
        for (std::size_t i = 0; i < x.size(); ++i) z += row[i] * x[i];
        h[j] = std::tanh(z);
    }
    double z = m.b2;
    for (std::size_t j = 0; j < hidden; ++j) z += m.w2[j] * h[j];
    return sigmoid(z);
}

// Parameter gradient accumulator mirroring ModelState's shapes.
struct Gradients {
    std::vector<double> w1;
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;

    explicit Gradients(const ModelState& m)
        : w1(m.w1.size(), 0.0), b1(m.b1.size(), 0.0), w2(m.w2.size(), 0.0) {}

    void zero() {
        std::fill(w1.begin(), w1.end(), 0.0);
        std::fill(b1.begin(), b1.end(), 0.0);
        std::fill(w2.begin(), w2.end(), 0.0);
        b2 = 0.0;
    }
};

// Backpropagates dL/dy for one example into the accumulator.
inline void accumulate_gradient(const ModelState& m, const std::vector<double>& x,
                                const std::vector<double>& hidden, double y, double dloss_dy,
                                Gradients& grads) {
    const double dz = dloss_dy * y * (1.0 - y);  // through the output sigmoid
    if (m.kind == ModelKind::linear) {
        for (std::size_t i = 0; i < x.size(); ++i) grads.w2[i] += dz * x[i];
        grads.b2 += dz;
        return;
    }
    const auto hidden_n = static_cast<std::size_t>(m.hidden_width);
    for (std::size_t j = 0; j < hidden_n; ++j) {
        grads.w2[j] += dz * hidden[j];
        const double dz1 = dz * m.w2[j] * (1.0 - hidden[j] * hidden[j]);
        grads.b1[j] += dz1;
        double* grow = &grads.w1[j * x.size()];
        for (std::size_t i = 0; i < x.size(); ++i) grow[i] += dz1 * x[i];
    }
    grads.b2 += dz;
}

// heads iff the model output exceeds 0.5; an output of exactly 0.5 breaks
// the tie toward tails (label 0).
inline FlipOutcome predict(const ModelState& m, const TeaImage& img) {
    if (img.width() != m.width || img.height() != m.height)
        throw domain_error("predict: image dimensions do not match model");
    const double y = forward(m, featurize(img, m.scheme));
    return y > 0.5 ? FlipOutcome::heads : FlipOutcome::tails;
}

struct EvalReport {
    std::size_t n = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
};

using Predictor = std::function<FlipOutcome(const TeaImage&)>;

inline EvalReport evaluate_predictor(const Predictor& predictor, const Dataset& ds) {
    if (ds.records.empty()) throw domain_error("evaluate: empty dataset");
    EvalReport report;
    report.n = ds.records.size();
    for (const auto& rec : ds.records)
        if (predictor(rec.image) == rec.label) ++report.correct;
    report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.n);
    return report;
}

inline EvalReport evaluate(const ModelState& m, const Dataset& ds) {
    return evaluate_predictor([&](const TeaImage& img) { return predict(m, img); }, ds);
}

// --- checkpoint format -------------------------------------------------
//
// All integers and doubles little-endian:
//   "TSLB" | u32 version=1 | u8 kind | u8 scheme | u16 zero |
//   u32 width | u32 height | u32 hidden_width | u32 zero | u64 init_seed |
//   u64 param_count | param_count * f64   (order: w1, b1, w2, b2)

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

struct ByteReader {
    const std::string& data;
    std::size_t pos = 0;
    std::string where;

    std::uint8_t u8() {
        if (pos + 1 > data.size()) throw data_error(where + ": truncated checkpoint");
        return static_cast<std::uint8_t>(data[pos++]);
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
};

}  // namespace detail

inline void save_checkpoint(const ModelState& m, const std::filesystem::path& path) {
    std::string out;
    out += "TSLB";
    detail::put_u32(out, 1);
    out.push_back(static_cast<char>(m.kind));
    out.push_back(static_cast<char>(m.scheme));
    out.push_back('\0');
    out.push_back('\0');
    detail::put_u32(out, static_cast<std::uint32_t>(m.width));
    detail::put_u32(out, static_cast<std::uint32_t>(m.height));
    detail::put_u32(out, static_cast<std::uint32_t>(m.hidden_width));
    detail::put_u32(out, 0);
    detail::put_u64(out, m.init_seed);
    detail::put_u64(out, m.param_count());
    for (const double v : m.w1) detail::put_f64(out, v);
    for (const double v : m.b1) detail::put_f64(out, v);
    for (const double v : m.w2) detail::put_f64(out, v);
    detail::put_f64(out, m.b2);

    std::ofstream file(path, std::ios::binary);
    if (!file) throw data_error("cannot open for writing: " + path.string());
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw data_error("write failed: " + path.string());
}

inline ModelState load_checkpoint(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw data_error("cannot open: " + path.string());
    std::string blob((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());

    detail::ByteReader in{blob, 0, path.string()};
    if (blob.size() < 4 || blob.substr(0, 4) != "TSLB")
        throw data_error(path.string() + ": not a tasselab checkpoint");
    in.pos = 4;
    const std::uint32_t version = in.u32();
    if (version != 1)
        throw data_error(path.string() + ": unsupported checkpoint version " +
                         std::to_string(version));

    ModelState m;
    const std::uint8_t kind_byte = in.u8();
    const std::uint8_t scheme_byte = in.u8();
    if (kind_byte > 1 || scheme_byte > 3)
        throw data_error(path.string() + ": invalid kind/scheme bytes");
    m.kind = static_cast<ModelKind>(kind_byte);
    m.scheme = static_cast<FeatureScheme>(scheme_byte);
    in.u8();
    in.u8();
    m.width = static_cast<int>(in.u32());
    m.height = static_cast<int>(in.u32());
    m.hidden_width = static_cast<int>(in.u32());
    in.u32();
    m.init_seed = in.u64();
    const std::uint64_t params = in.u64();

    const std::size_t in_dim = m.input_dim();
    const auto hidden = static_cast<std::size_t>(m.hidden_width);
    const std::size_t expected =
        m.kind == ModelKind::linear ? in_dim + 1 : hidden * in_dim + hidden + hidden + 1;
    if (params != expected)
        throw data_error(path.string() + ": parameter count " + std::to_string(params) +
                         " does not match header (expected " + std::to_string(expected) + ")");

    if (m.kind == ModelKind::mlp) {
        m.w1.resize(hidden * in_dim);
        m.b1.resize(hidden);
        m.w2.resize(hidden);
    } else {
        m.w2.resize(in_dim);
    }
    for (auto& v : m.w1) v = in.f64();
    for (auto& v : m.b1) v = in.f64();
    for (auto& v : m.w2) v = in.f64();
    m.b2 = in.f64();
    return m;
}

}  // namespace tasselab
