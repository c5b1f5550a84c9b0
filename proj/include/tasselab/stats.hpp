#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "tasselab/errors.hpp"

namespace tasselab {

// Exact binomial coefficient for small arguments (fits in 64 bits).
inline std::uint64_t binomial_coefficient(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        // after this step result = C(n-k+i, i), so the division is exact
        result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return result;
}

namespace detail {

inline long double log_choose(std::int64_t n, std::int64_t k) {
    return std::lgamma(static_cast<long double>(n) + 1.0L) -
           std::lgamma(static_cast<long double>(k) + 1.0L) -
           std::lgamma(static_cast<long double>(n - k) + 1.0L);
}

// Row of Pascal's triangle in exact 64-bit integers (valid through n = 62).
inline std::vector<std::uint64_t> pascal_row(int n) {
    std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
    row[0] = 1;
    for (int m = 1; m <= n; ++m)
        for (int i = m; i >= 1; --i) row[static_cast<std::size_t>(i)] += row[static_cast<std::size_t>(i - 1)];
    return row;
}

}  // namespace detail

// Exact upper tail P(X >= k) for X ~ Binomial(n, p).
//
// For p = 1/2 and n <= 62 the tail is an integer count over 2^n equiprobable
// sequences and is computed that way (the division by 2^n is exact scaling).
// Otherwise the terms are summed in log space around their maximum, in long
// double; relative error stays below 1e-12 through n = 10,000.
inline double binomial_tail(std::int64_t n, std::int64_t k, double p) {
    if (n < 0 || k < 0 || k > n) throw domain_error("binomial_tail: need 0 <= k <= n");
    if (!(p > 0.0) || !(p < 1.0)) throw domain_error("binomial_tail: need 0 < p < 1");
    if (k == 0) return 1.0;

    if (p == 0.5 && n <= 62) {
        const auto row = detail::pascal_row(static_cast<int>(n));
        std::uint64_t count = 0;
        for (std::int64_t i = k; i <= n; ++i) count += row[static_cast<std::size_t>(i)];
        return static_cast<double>(count) / std::ldexp(1.0, static_cast<int>(n));
    }

    const long double log_p = std::log(static_cast<long double>(p));
    const long double log_q = std::log1p(static_cast<long double>(-p));
    long double max_log = -std::numeric_limits<long double>::infinity();
    std::vector<long double> logs;
    logs.reserve(static_cast<std::size_t>(n - k + 1));
    for (std::int64_t i = k; i <= n; ++i) {
        const long double lt = detail::log_choose(n, i) + static_cast<long double>(i) * log_p +
                               static_cast<long double>(n - i) * log_q;
        logs.push_back(lt);
        max_log = std::max(max_log, lt);
    }
    long double sum = 0.0L;
    for (const long double lt : logs) sum += std::exp(lt - max_log);
    const long double tail = std::exp(max_log + std::log(sum));
    return static_cast<double>(std::min(1.0L, tail));
}

struct BinomialResult {
    std::int64_t n = 0;
    std::int64_t k = 0;
    double p0 = 0.5;
    double p_value = 1.0;  // one-sided, P(X >= k | p0)
    double z_approx = 0.0;
};

inline BinomialResult binomial_test(std::int64_t correct, std::int64_t n, double p0 = 0.5) {
    BinomialResult result;
    result.n = n;
    result.k = correct;
    result.p0 = p0;
    result.p_value = binomial_tail(n, correct, p0);
    const double mean = static_cast<double>(n) * p0;
    const double sd = std::sqrt(static_cast<double>(n) * p0 * (1.0 - p0));
    result.z_approx = (static_cast<double>(correct) - mean) / sd;
    return result;
}

// Inverse standard normal CDF, algorithm AS 241 (PPND16, Wichura 1988).
inline double normal_quantile(double q) {
    if (!(q > 0.0) || !(q < 1.0)) throw domain_error("normal_quantile: need 0 < q < 1");
    const double r = q - 0.5;
    if (std::abs(r) <= 0.425) {
        const double s = 0.180625 - r * r;
        return r *
               (((((((2.5090809287301226727e3 * s + 3.3430575583588128105e4) * s +
                     6.7265770927008700853e4) * s + 4.5921953931549871457e4) * s +
                   1.3731693765509461125e4) * s + 1.9715909503065514427e3) * s +
                 1.3314166789178437745e2) * s + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * s + 2.8729085735721942674e4) * s +
                     3.9307895800092710610e4) * s + 2.1213794301586595867e4) * s +
                   5.3941960214247511077e3) * s + 6.8718700749205790830e2) * s +
                 4.2313330701600911252e1) * s + 1.0);
    }
    double t = r < 0.0 ? q : 1.0 - q;
    t = std::sqrt(-std::log(t));
    double value;
    if (t <= 5.0) {
        t -= 1.6;
        value = (((((((7.74545014278341407640e-4 * t + 2.27238449892691845833e-2) * t +
                      2.41780725177450611770e-1) * t + 1.27045825245236838258e0) * t +
                    3.64784832476320460504e0) * t + 5.76949722146069140550e0) * t +
                  4.63033784615654529590e0) * t + 1.42343711074968357734e0) /
                (((((((1.05075007164441684324e-9 * t + 5.47593808499534494600e-4) * t +
                      1.51986665636164571966e-2) * t + 1.48103976427480074590e-1) * t +
                    6.89767334985100004550e-1) * t + 1.67638483018380384940e0) * t +
                  2.05319162663775882187e0) * t + 1.0);
    } else {
        t -= 5.0;
        value = (((((((2.01033439929228813265e-7 * t + 2.71155556874348757815e-5) * t +
                      1.24266094738807843860e-3) * t + 2.65321895265761230930e-2) * t +
                    2.96560571828504891230e-1) * t + 1.78482653991729133580e0) * t +
                  5.46378491116411436990e0) * t + 6.65790464350110377720e0) /
                (((((((2.04426310338993978564e-15 * t + 1.42151175831644588870e-7) * t +
                      1.84631831751005468180e-5) * t + 7.86869131145613259100e-4) * t +
                    1.48753612908506148525e-2) * t + 1.36929880922735805310e-1) * t +
                  5.99832206555887937690e-1) * t + 1.0);
    }
    return r < 0.0 ? -value : value;
}

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

// Wilson score interval for a binomial proportion.
inline Interval wilson_ci(std::int64_t correct, std::int64_t n, double level = 0.95) {
    if (n <= 0) throw domain_error("wilson_ci: n must be > 0");
    if (correct < 0 || correct > n) throw domain_error("wilson_ci: need 0 <= correct <= n");
    if (!(level > 0.0) || !(level < 1.0)) throw domain_error("wilson_ci: need 0 < level < 1");

    const double z = normal_quantile(0.5 + level / 2.0);
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(correct) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (phat + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;

    Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (correct == 0) ci.lo = 0.0;
    if (correct == n) ci.hi = 1.0;
    return ci;
}

// Round half away from zero at the given number of decimals (display rule).
inline double round_half_up(double value, int decimals) {
    const double factor = std::pow(10.0, decimals);
    const double sign = value < 0.0 ? -1.0 : 1.0;
    return sign * std::floor(std::abs(value) * factor + 0.5) / factor;
}

// Relative accuracy gain in percent: (new - old) / old * 100. The raw value;
// displays round it half-up to 2 decimals.
inline double relative_gain(double new_accuracy, double old_accuracy) {
    if (!(old_accuracy > 0.0)) throw domain_error("relative_gain: old accuracy must be > 0");
    return (new_accuracy - old_accuracy) / old_accuracy * 100.0;
}

struct GainReport {
    double new_accuracy = 0.0;
    double old_accuracy = 0.0;
    double relative_gain_percent = 0.0;  // raw
    double data_reduction_percent = 0.0;  // raw
};

inline GainReport gain_report(double new_accuracy, double old_accuracy,
                              std::size_t new_train_size, std::size_t old_train_size) {
    GainReport g;
    g.new_accuracy = new_accuracy;
    g.old_accuracy = old_accuracy;
    g.relative_gain_percent = relative_gain(new_accuracy, old_accuracy);
    if (old_train_size == 0) throw domain_error("gain_report: old train size must be > 0");
    g.data_reduction_percent = 100.0 *
                               static_cast<double>(old_train_size - new_train_size) /
                               static_cast<double>(old_train_size);
    return g;
}

// --- comparison table ----------------------------------------------------

struct ComparisonEntry {
    std::string name;
    std::int64_t correct = 0;
    std::int64_t n = 0;
    std::size_t train_size = 0;

    double accuracy() const { return static_cast<double>(correct) / static_cast<double>(n); }
};

// Accuracy/gain/data-reduction table for a subject classifier measured
// against reference classifiers trained on more data. Gains and reductions
// are of the subject relative to each reference.
struct ComparisonReport {
    std::vector<ComparisonEntry> references;
    ComparisonEntry subject;
    std::vector<GainReport> gains;        // one per reference
    std::vector<BinomialResult> ref_tests;
    BinomialResult subject_test;

    std::string to_text() const;
    std::string to_csv() const;
};

inline ComparisonReport compare_report(std::vector<ComparisonEntry> references,
                                       ComparisonEntry subject) {
    if (references.empty()) throw domain_error("compare_report: need at least one reference");
    ComparisonReport report;
    report.references = std::move(references);
    report.subject = std::move(subject);
    for (const auto& ref : report.references) {
        report.gains.push_back(gain_report(report.subject.accuracy(), ref.accuracy(),
                                           report.subject.train_size, ref.train_size));
        report.ref_tests.push_back(binomial_test(ref.correct, ref.n));
    }
    report.subject_test = binomial_test(report.subject.correct, report.subject.n);
    return report;
}

namespace detail {

inline std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

inline std::string fmt_sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace detail

inline std::string ComparisonReport::to_text() const {
    std::ostringstream out;
    auto line = [&](const std::string& metric, const std::vector<std::string>& cells,
                    const std::string& note = "") {
        out << "  " << metric;
        for (std::size_t pad = metric.size(); pad < 28; ++pad) out << ' ';
        for (const auto& cell : cells) {
            out << cell;
            for (std::size_t pad = cell.size(); pad < 16; ++pad) out << ' ';
        }
        if (!note.empty()) out << "  " << note;
        out << "\n";
    };

    std::vector<std::string> header;
    for (const auto& ref : references) header.push_back(ref.name);
    header.push_back(subject.name);
    line("", header);

    std::vector<std::string> acc, frac, pvals, gains_cells, reduction_cells;
    for (std::size_t i = 0; i < references.size(); ++i) {
        acc.push_back(detail::fmt(references[i].accuracy(), 4));
        frac.push_back(std::to_string(references[i].correct) + "/" +
                       std::to_string(references[i].n));
        pvals.push_back(detail::fmt_sci(ref_tests[i].p_value));
        gains_cells.push_back(detail::fmt(round_half_up(gains[i].relative_gain_percent, 2), 2));
        reduction_cells.push_back(
            detail::fmt(round_half_up(gains[i].data_reduction_percent, 2), 2));
    }
    acc.push_back(detail::fmt(subject.accuracy(), 4));
    frac.push_back(std::to_string(subject.correct) + "/" + std::to_string(subject.n));
    pvals.push_back(detail::fmt_sci(subject_test.p_value));
    gains_cells.push_back("-");
    reduction_cells.push_back("-");

    line("accuracy", acc);
    line("correct/n", frac);
    line("binomial p (one-sided)", pvals);
    line("subject gain %", gains_cells);
    const double reduction = gains.front().data_reduction_percent;
    const auto truncated = static_cast<long long>(reduction);
    std::string note;
    if (static_cast<double>(truncated) != round_half_up(reduction, 2))
        note = "NOTE: exact " + detail::fmt(round_half_up(reduction, 2), 2) +
               "%, integer truncation gives " + std::to_string(truncated) + "%";
    line("data reduction %", reduction_cells, note);
    return out.str();
}

inline std::string ComparisonReport::to_csv() const {
    std::ostringstream out;
    out << "metric";
    for (const auto& ref : references) out << "," << ref.name;
    out << "," << subject.name << ",note\n";

    auto row = [&](const std::string& metric, const std::vector<std::string>& cells,
                   const std::string& note = "") {
        out << metric;
        for (const auto& cell : cells) out << "," << cell;
        out << "," << note << "\n";
    };

    std::vector<std::string> acc, correct, n_cells, pvals, gain_cells, red_cells, train_cells;
    for (std::size_t i = 0; i < references.size(); ++i) {
        acc.push_back(detail::fmt(references[i].accuracy(), 4));
        correct.push_back(std::to_string(references[i].correct));
        n_cells.push_back(std::to_string(references[i].n));
        train_cells.push_back(std::to_string(references[i].train_size));
        pvals.push_back(detail::fmt_sci(ref_tests[i].p_value));
        gain_cells.push_back(detail::fmt(round_half_up(gains[i].relative_gain_percent, 2), 2));
        red_cells.push_back(detail::fmt(round_half_up(gains[i].data_reduction_percent, 2), 2));
    }
    acc.push_back(detail::fmt(subject.accuracy(), 4));
    correct.push_back(std::to_string(subject.correct));
    n_cells.push_back(std::to_string(subject.n));
    train_cells.push_back(std::to_string(subject.train_size));
    pvals.push_back(detail::fmt_sci(subject_test.p_value));
    gain_cells.push_back("");
    red_cells.push_back("");

    row("accuracy", acc);
    row("correct", correct);
    row("n", n_cells);
    row("train_size", train_cells);
    row("binomial_p_one_sided", pvals);
    row("subject_gain_percent", gain_cells, "rounded half-up to 2 decimals");
    const double reduction = gains.front().data_reduction_percent;
    const auto truncated = static_cast<long long>(reduction);
    std::string note = "raw " + detail::fmt_sci(reduction);
    if (static_cast<double>(truncated) != round_half_up(reduction, 2))
        note += "; integer truncation gives " + std::to_string(truncated);
    row("data_reduction_percent", red_cells, note);
    return out.str();
}

}  // namespace tasselab
