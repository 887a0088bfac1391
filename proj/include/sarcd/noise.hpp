#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "sarcd/raster.hpp"
#include "sarcd/rng.hpp"

namespace sarcd {

enum class NoiseKind { SaltPepper, Speckle };
enum class SpeckleDist { Uniform, Gaussian };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::SaltPepper;
    double level = 0.05; // density d for SaltPepper, variance v for Speckle
    std::uint64_t seed = 0;
    SpeckleDist dist = SpeckleDist::Uniform;
};

// Each pixel corrupted with probability d to 0 or 255 (equal odds).
// Uncorrupted pixels are copied bit for bit.
inline Raster add_salt_pepper(const Raster& r, double d, std::uint64_t seed) {
    if (!(d > 0.0 && d <= 1.0))
        throw std::invalid_argument("add_salt_pepper: density must lie in (0,1]");
    Rng rng(seed);
    Raster out = r;
    for (double& v : out.pixels)
        if (rng.uniform01() < d)
            v = rng.uniform01() < 0.5 ? 0.0 : 255.0;
    return out;
}

// Multiplicative model out = r * (1 + n), Var(n) = v, zero-mean n.
// Uniform n on [-sqrt(3v), sqrt(3v)] by default; output clamped to [0, 255].
inline Raster add_speckle(const Raster& r, double v, std::uint64_t seed,
                          SpeckleDist dist = SpeckleDist::Uniform) {
    if (!(v > 0.0))
        throw std::invalid_argument("add_speckle: variance must be positive");
    Rng rng(seed);
    Raster out = r;
    double half = std::sqrt(3.0 * v);
    double sigma = std::sqrt(v);
    for (double& p : out.pixels) {
        double n = dist == SpeckleDist::Uniform ? rng.uniform(-half, half) : sigma * rng.normal();
        p = std::clamp(p * (1.0 + n), 0.0, 255.0);
    }
    return out;
}

inline Raster apply_noise(const Raster& r, const NoiseSpec& spec) {
    if (spec.kind == NoiseKind::SaltPepper)
        return add_salt_pepper(r, spec.level, spec.seed);
    return add_speckle(r, spec.level, spec.seed, spec.dist);
}

inline const char* noise_kind_name(NoiseKind k) {
    return k == NoiseKind::SaltPepper ? "salt_pepper" : "speckle";
}

} // namespace sarcd
