#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "sarcd/errors.hpp"
#include "sarcd/raster.hpp"
#include "sarcd/rng.hpp"

namespace sarcd {

struct SyntheticPair {
    Raster before;
    Raster after;
    BinaryMap reference;
};

namespace detail {

// Rectangle or disk covering roughly frac of the image, fully inside it.
inline std::vector<std::uint8_t> sample_shape_mask(int w, int h, Rng& rng, double frac) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(w) * h, 0);
    double area = frac * w * h;
    if (rng.below(2) == 1) {
        int rad = std::max(3, static_cast<int>(std::lround(std::sqrt(area / std::numbers::pi))));
        int side = std::min(w, h);
        if (2 * rad + 1 > side - 2)
            rad = (side - 3) / 2;
        int cy = rad + static_cast<int>(rng.below(static_cast<std::uint64_t>(h - 2 * rad)));
        int cx = rad + static_cast<int>(rng.below(static_cast<std::uint64_t>(w - 2 * rad)));
        for (int r = cy - rad; r <= cy + rad; ++r)
            for (int c = cx - rad; c <= cx + rad; ++c)
                if ((r - cy) * (r - cy) + (c - cx) * (c - cx) <= rad * rad)
                    mask[static_cast<std::size_t>(r) * w + c] = 1;
        return mask;
    }
    double aspect = std::exp(rng.uniform(-0.69, 0.69));
    int hh = std::max(3, static_cast<int>(std::lround(std::sqrt(area * aspect))));
    int ww = std::max(3, static_cast<int>(std::lround(area / hh)));
    hh = std::min(hh, h);
    ww = std::min(ww, w);
    int r0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(h - hh + 1)));
    int c0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(w - ww + 1)));
    for (int r = r0; r < r0 + hh; ++r)
        for (int c = c0; c < c0 + ww; ++c)
            mask[static_cast<std::size_t>(r) * w + c] = 1;
    return mask;
}

} // namespace detail

// Two-tone (50/200) before image with a few bright background features, plus
// 2-4 change regions whose tone is flipped in the after image. Each change
// region lands on a single tone of the before image, regions are mutually
// disjoint, each covers at least ~3% of the image, and together at most 25%.
inline SyntheticPair make_synthetic_pair(int width, int height, std::uint64_t seed) {
    if (width < 64 || height < 64)
        throw std::invalid_argument("make_synthetic_pair: dimensions must be at least 64x64");
    constexpr double low = 50.0, high = 200.0;
    Rng rng(seed);
    std::size_t n = static_cast<std::size_t>(width) * height;

    Raster before(width, height, low);
    int n_background = 1 + static_cast<int>(rng.below(3));
    for (int i = 0; i < n_background; ++i) {
        double frac = 0.04 + 0.06 * rng.uniform01();
        auto mask = detail::sample_shape_mask(width, height, rng, frac);
        for (std::size_t p = 0; p < n; ++p)
            if (mask[p])
                before.pixels[p] = high;
    }

    std::vector<std::uint8_t> ref(n, 0);
    std::size_t ref_count = 0;
    int n_change = 2 + static_cast<int>(rng.below(3));
    for (int i = 0; i < n_change; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
            double frac = 0.032 + 0.028 * rng.uniform01();
            auto mask = detail::sample_shape_mask(width, height, rng, frac);
            std::size_t count = 0;
            for (std::size_t p = 0; p < n; ++p)
                count += mask[p];
            if (count < 0.031 * static_cast<double>(n))
                continue;
            double tone = 0.0;
            bool pure = true, overlaps = false;
            for (std::size_t p = 0; p < n && pure && !overlaps; ++p) {
                if (!mask[p])
                    continue;
                if (tone == 0.0)
                    tone = before.pixels[p];
                else if (before.pixels[p] != tone)
                    pure = false;
                if (ref[p])
                    overlaps = true;
            }
            if (!pure || overlaps)
                continue;
            if (static_cast<double>(ref_count + count) > 0.25 * static_cast<double>(n))
                continue;
            for (std::size_t p = 0; p < n; ++p)
                ref[p] |= mask[p];
            ref_count += count;
            placed = true;
        }
        if (!placed)
            throw Error("make_synthetic_pair: could not place a change region");
    }

    SyntheticPair pair;
    pair.after = before;
    pair.reference = BinaryMap(width, height);
    for (std::size_t p = 0; p < n; ++p) {
        if (!ref[p])
            continue;
        pair.after.pixels[p] = before.pixels[p] == low ? high : low;
        pair.reference.labels[p] = Label::changed;
    }
    pair.before = std::move(before);
    return pair;
}

} // namespace sarcd
