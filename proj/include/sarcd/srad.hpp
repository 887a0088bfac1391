#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "sarcd/errors.hpp"
#include "sarcd/raster.hpp"

namespace sarcd {

struct SradParams {
    int iterations = 50;
    double dt = 0.5;              // explicit scheme stable for dt in (0, 0.5]
    std::optional<Rect> roi;      // homogeneous window for q0; nullopt = pick automatically
    double q0_floor = 1e-4;
};

namespace detail {

inline void require_roi_inside(const Raster& r, const Rect& roi, const char* what) {
    if (roi.width < 1 || roi.height < 1 || roi.row < 0 || roi.col < 0 ||
        roi.row + roi.height > r.height || roi.col + roi.width > r.width)
        throw std::invalid_argument(std::string(what) + ": roi does not fit inside the image");
}

} // namespace detail

// Coefficient of variation sqrt(var)/mean over the window, floored at q0_floor.
inline double estimate_q0(const Raster& r, const Rect& roi, double q0_floor = 1e-4) {
    detail::require_roi_inside(r, roi, "estimate_q0");
    double sum = 0.0, sum2 = 0.0;
    double count = static_cast<double>(roi.width) * roi.height;
    for (int i = roi.row; i < roi.row + roi.height; ++i)
        for (int j = roi.col; j < roi.col + roi.width; ++j) {
            double v = r.at(i, j);
            sum += v;
            sum2 += v * v;
        }
    double mean = sum / count;
    if (!(mean > 0.0))
        throw DegenerateInputError("estimate_q0: roi mean must be positive");
    double var = std::max(sum2 / count - mean * mean, 0.0);
    return std::max(std::sqrt(var) / mean, q0_floor);
}

// 16x16 window on a stride-8 grid with the smallest coefficient of variation;
// ties go to the smallest (row, col). A constant window counts as cv = 0 even
// when its mean is not positive.
inline Rect auto_roi(const Raster& r) {
    if (r.width < 16 || r.height < 16)
        throw std::invalid_argument("auto_roi: image must be at least 16x16");
    double best_cv = 0.0;
    Rect best{-1, -1, 16, 16};
    for (int r0 = 0; r0 + 16 <= r.height; r0 += 8)
        for (int c0 = 0; c0 + 16 <= r.width; c0 += 8) {
            double sum = 0.0, sum2 = 0.0;
            for (int i = r0; i < r0 + 16; ++i)
                for (int j = c0; j < c0 + 16; ++j) {
                    double v = r.at(i, j);
                    sum += v;
                    sum2 += v * v;
                }
            double mean = sum / 256.0;
            double var = std::max(sum2 / 256.0 - mean * mean, 0.0);
            double cv;
            if (var == 0.0)
                cv = 0.0;
            else if (mean <= 0.0)
                cv = std::numeric_limits<double>::infinity();
            else
                cv = std::sqrt(var) / mean;
            if (best.row < 0 || cv < best_cv) {
                best_cv = cv;
                best.row = r0;
                best.col = c0;
            }
        }
    return best;
}

// Instantaneous coefficient of variation:
//   q = sqrt(max(0, (1/2)(|grad I|/I)^2 - (1/16)(lap I/I)^2)) / (1 + (1/4) lap I/I)
// with |grad I|^2 = half the sum of squared forward and backward differences
// per axis, 4-neighbor Laplacian, replicate boundaries. The denominator is
// floored at 1e-6 in magnitude.
inline Raster icov(const Raster& r) {
    Raster q(r.width, r.height);
    for (int i = 0; i < r.height; ++i)
        for (int j = 0; j < r.width; ++j) {
            double v = r.at(i, j);
            if (!(v > 0.0))
                throw std::invalid_argument("icov: input must be positive");
            double up = r.clamped(i - 1, j), down = r.clamped(i + 1, j);
            double left = r.clamped(i, j - 1), right = r.clamped(i, j + 1);
            double g2 = 0.5 * ((right - v) * (right - v) + (v - left) * (v - left) +
                               (down - v) * (down - v) + (v - up) * (v - up));
            double lap = up + down + left + right - 4.0 * v;
            double p2 = g2 / (v * v);
            double l = lap / v;
            double num = std::max(0.5 * p2 - l * l / 16.0, 0.0);
            double den = 1.0 + 0.25 * l;
            if (std::abs(den) < 1e-6)
                den = den == 0.0 ? 1e-6 : std::copysign(1e-6, den);
            q.at(i, j) = std::sqrt(num) / den;
        }
    return q;
}

// c = 1 / (1 + (q^2 - q0^2) / (q0^2 (1 + q0^2))), clamped to [0, 1]. The
// clamp matters: q < q0 drives the raw expression above 1 (or negative past
// the pole), and edges with huge q drive it toward 0 from below.
inline Raster diffusion_coeff(const Raster& q, double q0) {
    if (!(q0 > 0.0))
        throw std::invalid_argument("diffusion_coeff: q0 must be positive");
    Raster c(q.width, q.height);
    double denom = q0 * q0 * (1.0 + q0 * q0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        double raw = 1.0 / (1.0 + (q.pixels[i] * q.pixels[i] - q0 * q0) / denom);
        c.pixels[i] = std::clamp(raw, 0.0, 1.0);
    }
    return c;
}

// One explicit diffusion step:
//   out = I + (dt/4) [ c(i+1,j)(I(i+1,j)-I) + c(i,j)(I(i-1,j)-I)
//                    + c(i,j+1)(I(i,j+1)-I) + c(i,j)(I(i,j-1)-I) ]
// with replicate boundaries. Output floored at min(I) * 1e-3 to stay positive.
inline Raster srad_step(const Raster& r, double q0, double dt) {
    if (!(dt > 0.0 && dt <= 0.5))
        throw std::invalid_argument("srad_step: dt must lie in (0, 0.5]");
    Raster c = diffusion_coeff(icov(r), q0);
    double floor = *std::min_element(r.pixels.begin(), r.pixels.end()) * 1e-3;
    Raster out(r.width, r.height);
    for (int i = 0; i < r.height; ++i)
        for (int j = 0; j < r.width; ++j) {
            double v = r.at(i, j);
            double cc = c.at(i, j);
            double div = c.clamped(i + 1, j) * (r.clamped(i + 1, j) - v) +
                         cc * (r.clamped(i - 1, j) - v) +
                         c.clamped(i, j + 1) * (r.clamped(i, j + 1) - v) +
                         cc * (r.clamped(i, j - 1) - v);
            out.at(i, j) = std::max(v + dt / 4.0 * div, floor);
        }
    return out;
}

// Iterated diffusion. The q0 window is fixed up front (given or auto-picked)
// and q0 is re-estimated from it against the current iterate every step.
inline Raster srad(const Raster& r, const SradParams& p) {
    if (p.iterations < 1)
        throw std::invalid_argument("srad: iterations must be at least 1");
    Rect roi;
    if (p.roi) {
        roi = *p.roi;
        detail::require_roi_inside(r, roi, "srad");
        if (roi.width < 8 || roi.height < 8)
            throw std::invalid_argument("srad: roi must be at least 8x8");
    } else {
        roi = auto_roi(r);
    }
    Raster cur = r;
    for (int it = 0; it < p.iterations; ++it) {
        double q0 = estimate_q0(cur, roi, p.q0_floor);
        cur = srad_step(cur, q0, p.dt);
    }
    return cur;
}

} // namespace sarcd
