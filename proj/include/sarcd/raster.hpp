#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sarcd/errors.hpp"

namespace sarcd {

// Dense row-major grid of real intensities.
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    Raster() = default;
    Raster(int w, int h, double fill = 0.0) : width(w), height(h) {
        if (w <= 0 || h <= 0)
            throw std::invalid_argument("raster dimensions must be positive");
        pixels.assign(static_cast<std::size_t>(w) * h, fill);
    }

    std::size_t size() const { return pixels.size(); }

    double& at(int r, int c) { return pixels[static_cast<std::size_t>(r) * width + c]; }
    double at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * width + c]; }

    // replicate (clamp-to-edge) access for stencil code
    double clamped(int r, int c) const {
        r = std::clamp(r, 0, height - 1);
        c = std::clamp(c, 0, width - 1);
        return at(r, c);
    }

    bool same_shape(const Raster& o) const { return width == o.width && height == o.height; }
};

enum class Label : std::uint8_t { unchanged = 0, changed = 1 };

struct BinaryMap {
    int width = 0;
    int height = 0;
    std::vector<Label> labels;

    BinaryMap() = default;
    BinaryMap(int w, int h, Label fill = Label::unchanged) : width(w), height(h) {
        if (w <= 0 || h <= 0)
            throw std::invalid_argument("map dimensions must be positive");
        labels.assign(static_cast<std::size_t>(w) * h, fill);
    }

    std::size_t size() const { return labels.size(); }

    Label& at(int r, int c) { return labels[static_cast<std::size_t>(r) * width + c]; }
    Label at(int r, int c) const { return labels[static_cast<std::size_t>(r) * width + c]; }

    bool operator==(const BinaryMap& o) const {
        return width == o.width && height == o.height && labels == o.labels;
    }
};

// Axis-aligned window, used for SRAD homogeneous-region selection.
struct Rect {
    int row = 0;
    int col = 0;
    int height = 0;
    int width = 0;
};

inline void require_same_shape(const Raster& a, const Raster& b, const char* what) {
    if (!a.same_shape(b))
        throw DimensionMismatchError(std::string(what) + ": rasters are " +
                                     std::to_string(a.width) + "x" + std::to_string(a.height) +
                                     " vs " + std::to_string(b.width) + "x" +
                                     std::to_string(b.height));
}

inline void require_finite(const Raster& r, const char* what) {
    for (double v : r.pixels)
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string(what) + ": raster contains NaN or Inf");
}

// Affine map of [min, max] onto [lo, hi]; a constant raster maps to lo.
inline Raster normalize(const Raster& r, double lo, double hi) {
    if (!(hi > lo))
        throw std::invalid_argument("normalize: hi must exceed lo");
    auto [mn_it, mx_it] = std::minmax_element(r.pixels.begin(), r.pixels.end());
    double mn = *mn_it, mx = *mx_it;
    Raster out(r.width, r.height);
    if (mx == mn) {
        std::fill(out.pixels.begin(), out.pixels.end(), lo);
        return out;
    }
    double scale = (hi - lo) / (mx - mn);
    for (std::size_t i = 0; i < r.size(); ++i)
        out.pixels[i] = lo + (r.pixels[i] - mn) * scale;
    return out;
}

// BinaryMap <-> {0, 255} raster, the PGM serialization of change maps
inline Raster to_raster(const BinaryMap& m) {
    Raster out(m.width, m.height);
    for (std::size_t i = 0; i < m.size(); ++i)
        out.pixels[i] = m.labels[i] == Label::changed ? 255.0 : 0.0;
    return out;
}

inline BinaryMap to_binary_map(const Raster& r) {
    BinaryMap out(r.width, r.height);
    for (std::size_t i = 0; i < r.size(); ++i)
        out.labels[i] = r.pixels[i] >= 128.0 ? Label::changed : Label::unchanged;
    return out;
}

inline std::size_t count_changed(const BinaryMap& m) {
    std::size_t n = 0;
    for (Label l : m.labels)
        if (l == Label::changed)
            ++n;
    return n;
}

} // namespace sarcd
