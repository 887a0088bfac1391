#pragma once

#include <array>
#include <cmath>

#include "sarcd/raster.hpp"

namespace sarcd {

// 3x3 kernel, unit sum, rotationally symmetric.
struct Kernel3x3 {
    std::array<double, 9> weights{};

    double at(int dr, int dc) const { return weights[static_cast<std::size_t>(dr + 1) * 3 + (dc + 1)]; }
    double& at(int dr, int dc) { return weights[static_cast<std::size_t>(dr + 1) * 3 + (dc + 1)]; }
};

// Gaussian low-pass, sigma 0.5, normalized to unit sum.
inline Kernel3x3 gaussian_kernel() {
    Kernel3x3 k;
    double sum = 0.0;
    for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
            double w = std::exp(-(dr * dr + dc * dc) / 0.5);
            k.at(dr, dc) = w;
            sum += w;
        }
    for (double& w : k.weights)
        w /= sum;
    return k;
}

// Correlation with replicate padding; identical to convolution for the
// symmetric kernels used here.
inline Raster convolve(const Raster& r, const Kernel3x3& k) {
    Raster out(r.width, r.height);
    for (int i = 0; i < r.height; ++i)
        for (int j = 0; j < r.width; ++j) {
            double acc = 0.0;
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc)
                    acc += k.at(dr, dc) * r.clamped(i + dr, j + dc);
            out.at(i, j) = acc;
        }
    return out;
}

namespace detail {

inline Raster log_image(const Raster& r, const char* what) {
    Raster out(r.width, r.height);
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(r.pixels[i] > 0.0))
            throw std::invalid_argument(std::string(what) + ": inputs must be positive");
        out.pixels[i] = std::log(r.pixels[i]);
    }
    return out;
}

} // namespace detail

// Pointwise |ln(x2/x1)|. Inputs are expected pre-normalized to [1, 256].
inline Raster log_ratio(const Raster& x1, const Raster& x2) {
    require_same_shape(x1, x2, "log_ratio");
    Raster a = detail::log_image(x1, "log_ratio");
    Raster b = detail::log_image(x2, "log_ratio");
    Raster out(x1.width, x1.height);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.pixels[i] = std::abs(b.pixels[i] - a.pixels[i]);
    return out;
}

// Gaussian-smooth both log images, then sum |difference| over each pixel's
// 3x3 window (replicate padding). Brightens changed regions while averaging
// out isolated noise.
inline Raster gauss_log_ratio(const Raster& x1, const Raster& x2) {
    require_same_shape(x1, x2, "gauss_log_ratio");
    Kernel3x3 g = gaussian_kernel();
    Raster s1 = convolve(detail::log_image(x1, "gauss_log_ratio"), g);
    Raster s2 = convolve(detail::log_image(x2, "gauss_log_ratio"), g);
    Raster diff(x1.width, x1.height);
    for (std::size_t i = 0; i < diff.size(); ++i)
        diff.pixels[i] = std::abs(s1.pixels[i] - s2.pixels[i]);
    Raster out(x1.width, x1.height);
    for (int i = 0; i < out.height; ++i)
        for (int j = 0; j < out.width; ++j) {
            double acc = 0.0;
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc)
                    acc += diff.clamped(i + dr, j + dc);
            out.at(i, j) = acc;
        }
    return out;
}

} // namespace sarcd
