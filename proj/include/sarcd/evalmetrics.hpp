#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "sarcd/errors.hpp"
#include "sarcd/raster.hpp"

namespace sarcd {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + tn + fp + fn; }
    std::uint64_t actual_changed() const { return tp + fn; }
    std::uint64_t actual_unchanged() const { return fp + tn; }
};

struct MetricReport {
    double oe_percent = 0.0;
    double pcc_percent = 0.0;
    double kc = 0.0;  // NaN when kappa is undefined (single-class reference and map)
    double rmse = 0.0;
    double psnr_db = 0.0;
};

// Per-pixel tally with changed as the positive class.
inline ConfusionCounts confusion(const BinaryMap& map, const BinaryMap& reference) {
    if (map.width != reference.width || map.height != reference.height)
        throw DimensionMismatchError("confusion: map and reference disagree");
    ConfusionCounts c;
    for (std::size_t i = 0; i < map.size(); ++i) {
        bool got = map.labels[i] == Label::changed;
        bool want = reference.labels[i] == Label::changed;
        if (got && want)
            ++c.tp;
        else if (!got && !want)
            ++c.tn;
        else if (got)
            ++c.fp;
        else
            ++c.fn;
    }
    return c;
}

inline double oe(const ConfusionCounts& c) {
    std::uint64_t n = c.total();
    if (n == 0)
        throw std::invalid_argument("oe: empty counts");
    return 100.0 * static_cast<double>(c.fp + c.fn) / static_cast<double>(n);
}

// Complement of oe by construction, so oe + pcc == 100 holds bit-exactly.
inline double pcc(const ConfusionCounts& c) {
    return 100.0 - oe(c);
}

// Chance-corrected agreement (pcc - pre) / (1 - pre) with
// pre = (Nc^2 + Nu^2) / N^2, pcc as a fraction.
inline double kappa(const ConfusionCounts& c) {
    std::uint64_t n = c.total();
    if (n == 0)
        throw std::invalid_argument("kappa: empty counts");
    std::uint64_t n_c = c.actual_changed();
    std::uint64_t n_u = c.actual_unchanged();
    if (n_c == 0 || n_u == 0)
        throw DegenerateInputError("kappa: undefined for a single-class reference");
    double nn = static_cast<double>(n);
    double pre = (static_cast<double>(n_c) * static_cast<double>(n_c) +
                  static_cast<double>(n_u) * static_cast<double>(n_u)) /
                 (nn * nn);
    double agree = static_cast<double>(c.tp + c.tn) / nn;
    return (agree - pre) / (1.0 - pre);
}

// RMSE between {0,1}-valued maps: sqrt(disagreement / N).
inline double rmse(const BinaryMap& map, const BinaryMap& reference) {
    ConfusionCounts c = confusion(map, reference);
    return std::sqrt(static_cast<double>(c.fp + c.fn) / static_cast<double>(c.total()));
}

// 10 log10(max_f^2 / rmse^2), clamped to [0, 99]; an exact match scores 99.
inline double psnr(double rmse_val, double max_f = 255.0) {
    if (rmse_val < 0.0)
        throw std::invalid_argument("psnr: rmse must be non-negative");
    if (!(max_f > 0.0))
        throw std::invalid_argument("psnr: max_f must be positive");
    if (rmse_val == 0.0)
        return 99.0;
    return std::clamp(10.0 * std::log10(max_f * max_f / (rmse_val * rmse_val)), 0.0, 99.0);
}

// Bundled scoring used by the CLI and benchmark. kappa being undefined (all
// four pixels counts on one side) is reported as NaN rather than failing the
// whole run; the standalone kappa() still throws.
inline MetricReport evaluate(const BinaryMap& map, const BinaryMap& reference) {
    ConfusionCounts c = confusion(map, reference);
    MetricReport r;
    r.oe_percent = oe(c);
    r.pcc_percent = pcc(c);
    try {
        r.kc = kappa(c);
    } catch (const DegenerateInputError&) {
        r.kc = std::numeric_limits<double>::quiet_NaN();
    }
    r.rmse = rmse(map, reference);
    r.psnr_db = psnr(r.rmse);
    return r;
}

} // namespace sarcd
