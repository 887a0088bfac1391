#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "sarcd/errors.hpp"
#include "sarcd/raster.hpp"

namespace sarcd {

// numerical guards
inline constexpr double sigma_floor = 1e-3;  // minimum class std, DI gray levels
inline constexpr double prob_floor = 1e-12;  // floor inside -ln(mean membership)

struct ClassStats {
    double mean_u = 0.0;
    double std_u = sigma_floor;
    double mean_c = 0.0;
    double std_c = sigma_floor;
};

// Two per-class planes over the image grid. Memberships, energies, priors,
// distances, and neighborhood statistics all share this layout; u = unchanged
// plane, c = changed plane.
struct ClassPlanes {
    int width = 0;
    int height = 0;
    std::vector<double> u, c;

    ClassPlanes() = default;
    ClassPlanes(int w, int h) : width(w), height(h) {
        if (w <= 0 || h <= 0)
            throw std::invalid_argument("class planes dimensions must be positive");
        u.assign(static_cast<std::size_t>(w) * h, 0.0);
        c.assign(static_cast<std::size_t>(w) * h, 0.0);
    }

    std::size_t size() const { return u.size(); }
};

using Membership = ClassPlanes;  // planes sum to 1 per pixel

struct NeighborhoodStats {
    ClassPlanes mean_partition;  // mean membership over the 8-neighborhood
    ClassPlanes number;          // count of neighbors hard-labeled per class
};

namespace detail {

struct Histogram256 {
    std::array<double, 256> count{};
    double total = 0.0;
};

inline Histogram256 histogram256(const Raster& di) {
    Histogram256 h;
    for (double v : di.pixels) {
        int bin = std::clamp(static_cast<int>(std::floor(v)), 0, 255);
        h.count[static_cast<std::size_t>(bin)] += 1.0;
    }
    h.total = static_cast<double>(di.size());
    return h;
}

} // namespace detail

// Kittler-Illingworth minimum-error threshold over the 256-bin histogram:
// minimize J(T) = 1 + 2[P1 ln s1 + P2 ln s2] - 2[P1 ln P1 + P2 ln P2] for
// integer T in [1, 254], stats taken over bin indices. Classes with fewer
// than 2 pixels or s below sigma_floor are skipped; if no threshold is
// admissible the scan is retried with s floored, then additionally with
// single-pixel classes allowed, so near-two-valued inputs still resolve.
// Ties go to the smaller T.
inline double ki_threshold(const Raster& di) {
    detail::Histogram256 h = detail::histogram256(di);
    int nonempty = 0;
    for (double c : h.count)
        nonempty += c > 0.0;
    if (nonempty < 2)
        throw DegenerateInputError("ki_threshold: histogram needs at least 2 nonempty bins");

    std::array<double, 256> cum{}, cum_x{}, cum_xx{};
    double c = 0.0, s = 0.0, ss = 0.0;
    for (int b = 0; b < 256; ++b) {
        c += h.count[static_cast<std::size_t>(b)];
        s += h.count[static_cast<std::size_t>(b)] * b;
        ss += h.count[static_cast<std::size_t>(b)] * b * b;
        cum[static_cast<std::size_t>(b)] = c;
        cum_x[static_cast<std::size_t>(b)] = s;
        cum_xx[static_cast<std::size_t>(b)] = ss;
    }

    auto scan = [&](double min_pixels, bool floor_sigma) -> int {
        int best_t = -1;
        double best_j = 0.0;
        for (int t = 1; t <= 254; ++t) {
            double n1 = cum[static_cast<std::size_t>(t)];
            double n2 = h.total - n1;
            if (n1 < min_pixels || n2 < min_pixels)
                continue;
            double m1 = cum_x[static_cast<std::size_t>(t)] / n1;
            double m2 = (cum_x[255] - cum_x[static_cast<std::size_t>(t)]) / n2;
            double v1 = std::max(cum_xx[static_cast<std::size_t>(t)] / n1 - m1 * m1, 0.0);
            double v2 = std::max((cum_xx[255] - cum_xx[static_cast<std::size_t>(t)]) / n2 - m2 * m2, 0.0);
            double s1 = std::sqrt(v1), s2 = std::sqrt(v2);
            if (floor_sigma) {
                s1 = std::max(s1, sigma_floor);
                s2 = std::max(s2, sigma_floor);
            } else if (s1 < sigma_floor || s2 < sigma_floor) {
                continue;
            }
            double p1 = n1 / h.total, p2 = n2 / h.total;
            double j = 1.0 + 2.0 * (p1 * std::log(s1) + p2 * std::log(s2)) -
                       2.0 * (p1 * std::log(p1) + p2 * std::log(p2));
            if (best_t < 0 || j < best_j) {
                best_j = j;
                best_t = t;
            }
        }
        return best_t;
    };

    int t = scan(2.0, false);
    if (t < 0)
        t = scan(2.0, true);
    if (t < 0)
        t = scan(1.0, true);
    if (t < 0)
        throw DegenerateInputError("ki_threshold: no admissible threshold");
    return static_cast<double>(t);
}

// Population mean/std of the pixels at or below t (unchanged) and above t
// (changed); stds floored at sigma_floor.
inline ClassStats init_class_stats(const Raster& di, double t) {
    double n_u = 0.0, s_u = 0.0, ss_u = 0.0;
    double n_c = 0.0, s_c = 0.0, ss_c = 0.0;
    for (double v : di.pixels) {
        if (v <= t) {
            n_u += 1.0;
            s_u += v;
            ss_u += v * v;
        } else {
            n_c += 1.0;
            s_c += v;
            ss_c += v * v;
        }
    }
    if (n_u == 0.0 || n_c == 0.0)
        throw DegenerateInputError("init_class_stats: a class is empty at this threshold");
    ClassStats st;
    st.mean_u = s_u / n_u;
    st.std_u = std::max(std::sqrt(std::max(ss_u / n_u - st.mean_u * st.mean_u, 0.0)), sigma_floor);
    st.mean_c = s_c / n_c;
    st.std_c = std::max(std::sqrt(std::max(ss_c / n_c - st.mean_c * st.mean_c, 0.0)), sigma_floor);
    return st;
}

// Labels by strictly larger changed-membership, so an exact tie stays
// unchanged.
inline BinaryMap hard_labels(const Membership& mem) {
    BinaryMap map(mem.width, mem.height);
    for (std::size_t i = 0; i < mem.size(); ++i)
        map.labels[i] = mem.c[i] > mem.u[i] ? Label::changed : Label::unchanged;
    return map;
}

struct FcmResult {
    Membership membership;
    BinaryMap map;
    double centroid_u = 0.0;
    double centroid_c = 0.0;
    int iterations = 0;
};

// Two-class scalar FCM. Centroids start at min/max of the DI and alternate
// with membership updates until the largest centroid shift drops below tol.
// The brighter centroid is the changed class. A constant input has a single
// effective cluster and comes back all-unchanged.
inline FcmResult fcm(const Raster& di, double fuzzifier = 2.0, double tol = 1e-4,
                     int max_iter = 100) {
    if (!(fuzzifier > 1.0))
        throw std::invalid_argument("fcm: fuzzifier must exceed 1");
    if (max_iter < 1)
        throw std::invalid_argument("fcm: max_iter must be at least 1");
    require_finite(di, "fcm");

    FcmResult res;
    res.membership = Membership(di.width, di.height);
    auto [mn_it, mx_it] = std::minmax_element(di.pixels.begin(), di.pixels.end());
    double c_lo = *mn_it, c_hi = *mx_it;
    if (c_lo == c_hi) {
        std::fill(res.membership.u.begin(), res.membership.u.end(), 1.0);
        res.map = BinaryMap(di.width, di.height);
        res.centroid_u = c_lo;
        res.centroid_c = c_hi;
        return res;
    }

    double expo = 2.0 / (fuzzifier - 1.0);
    std::vector<double> w_lo(di.size()), w_hi(di.size());
    for (int it = 1; it <= max_iter; ++it) {
        res.iterations = it;
        double num_lo = 0.0, den_lo = 0.0, num_hi = 0.0, den_hi = 0.0;
        for (std::size_t i = 0; i < di.size(); ++i) {
            double y = di.pixels[i];
            double d_lo = std::abs(y - c_lo), d_hi = std::abs(y - c_hi);
            double u_lo;
            if (d_lo == 0.0 && d_hi == 0.0)
                u_lo = 0.5;
            else if (d_lo == 0.0)
                u_lo = 1.0;
            else if (d_hi == 0.0)
                u_lo = 0.0;
            else {
                double r_lo = std::pow(1.0 / d_lo, expo);
                double r_hi = std::pow(1.0 / d_hi, expo);
                u_lo = r_lo / (r_lo + r_hi);
            }
            w_lo[i] = std::pow(u_lo, fuzzifier);
            w_hi[i] = std::pow(1.0 - u_lo, fuzzifier);
            num_lo += w_lo[i] * y;
            den_lo += w_lo[i];
            num_hi += w_hi[i] * y;
            den_hi += w_hi[i];
            res.membership.u[i] = u_lo;
            res.membership.c[i] = 1.0 - u_lo;
        }
        double new_lo = den_lo > 0.0 ? num_lo / den_lo : c_lo;
        double new_hi = den_hi > 0.0 ? num_hi / den_hi : c_hi;
        double shift = std::max(std::abs(new_lo - c_lo), std::abs(new_hi - c_hi));
        c_lo = new_lo;
        c_hi = new_hi;
        if (shift < tol)
            break;
    }

    if (c_lo > c_hi) {
        std::swap(c_lo, c_hi);
        res.membership.u.swap(res.membership.c);
    }
    res.centroid_u = c_lo;
    res.centroid_c = c_hi;
    res.map = hard_labels(res.membership);
    return res;
}

// Per pixel and class: mean membership over the 8-neighborhood (replicate at
// borders, center excluded) and the count of neighbors hard-labeled with that
// class. Counts always sum to 8.
inline NeighborhoodStats neighborhood_stats(const Membership& mem, const BinaryMap& labels) {
    if (mem.width != labels.width || mem.height != labels.height)
        throw DimensionMismatchError("neighborhood_stats: membership and labels disagree");
    NeighborhoodStats ns;
    ns.mean_partition = ClassPlanes(mem.width, mem.height);
    ns.number = ClassPlanes(mem.width, mem.height);
    for (int i = 0; i < mem.height; ++i)
        for (int j = 0; j < mem.width; ++j) {
            double sum_u = 0.0, sum_c = 0.0, n_c = 0.0;
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0)
                        continue;
                    int r = std::clamp(i + dr, 0, mem.height - 1);
                    int c = std::clamp(j + dc, 0, mem.width - 1);
                    std::size_t p = static_cast<std::size_t>(r) * mem.width + c;
                    sum_u += mem.u[p];
                    sum_c += mem.c[p];
                    n_c += labels.labels[p] == Label::changed ? 1.0 : 0.0;
                }
            std::size_t p = static_cast<std::size_t>(i) * mem.width + j;
            ns.mean_partition.u[p] = sum_u / 8.0;
            ns.mean_partition.c[p] = sum_c / 8.0;
            ns.number.c[p] = n_c;
            ns.number.u[p] = 8.0 - n_c;
        }
    return ns;
}

// MRF energy per pixel and class:
//   E = -ln(max(mu, prob_floor)) - beta * t * n
// where t = sgn(u - 0.5) with sgn(0) = +1, and beta = beta0 * (1 - |mu - n/8|)
// trusts the spatial term most when soft and hard neighborhood evidence agree.
// The subtracted spatial term makes neighbor agreement lower the energy
// (smoothing); printed_sign flips it to the additive form for comparison runs.
inline ClassPlanes mrf_energy(const Membership& mem, const ClassPlanes& mean_partition,
                              const ClassPlanes& number, double beta0 = 1.0,
                              bool printed_sign = false) {
    ClassPlanes e(mem.width, mem.height);
    auto one = [&](const std::vector<double>& u, const std::vector<double>& mu,
                   const std::vector<double>& n, std::vector<double>& out) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            double t = u[i] >= 0.5 ? 1.0 : -1.0;
            double beta = beta0 * (1.0 - std::abs(mu[i] - n[i] / 8.0));
            double spatial = beta * t * n[i];
            out[i] = -std::log(std::max(mu[i], prob_floor)) + (printed_sign ? spatial : -spatial);
        }
    };
    one(mem.u, mean_partition.u, number.u, e.u);
    one(mem.c, mean_partition.c, number.c, e.c);
    return e;
}

// Two-class softmax of negated energies, evaluated in log space.
inline ClassPlanes prior_probs(const ClassPlanes& energy) {
    ClassPlanes pr(energy.width, energy.height);
    for (std::size_t i = 0; i < pr.size(); ++i) {
        double m = std::min(energy.u[i], energy.c[i]);
        double eu = std::exp(-(energy.u[i] - m));
        double ec = std::exp(-(energy.c[i] - m));
        pr.u[i] = eu / (eu + ec);
        pr.c[i] = ec / (eu + ec);
    }
    return pr;
}

// Negative log Gaussian likelihood per pixel and class:
//   d = ln(sigma sqrt(2 pi)) + (y - mu)^2 / (2 sigma^2)
inline ClassPlanes conditional_distance(const Raster& di, const ClassStats& stats) {
    if (!(stats.std_u > 0.0 && stats.std_c > 0.0))
        throw std::invalid_argument("conditional_distance: stds must be positive");
    ClassPlanes d(di.width, di.height);
    double log_u = std::log(stats.std_u * std::sqrt(2.0 * std::numbers::pi));
    double log_c = std::log(stats.std_c * std::sqrt(2.0 * std::numbers::pi));
    double inv_u = 1.0 / (2.0 * stats.std_u * stats.std_u);
    double inv_c = 1.0 / (2.0 * stats.std_c * stats.std_c);
    for (std::size_t i = 0; i < d.size(); ++i) {
        double y = di.pixels[i];
        d.u[i] = log_u + (y - stats.mean_u) * (y - stats.mean_u) * inv_u;
        d.c[i] = log_c + (y - stats.mean_c) * (y - stats.mean_c) * inv_c;
    }
    return d;
}

// J = sum over classes and pixels of u^2 d^2.
inline double objective(const Membership& mem, const ClassPlanes& distance) {
    if (mem.width != distance.width || mem.height != distance.height)
        throw DimensionMismatchError("objective: membership and distance disagree");
    double j = 0.0;
    for (std::size_t i = 0; i < mem.size(); ++i)
        j += mem.u[i] * mem.u[i] * distance.u[i] * distance.u[i] +
             mem.c[i] * mem.c[i] * distance.c[i] * distance.c[i];
    return j;
}

// u = pi exp(-d) normalized per pixel, evaluated in log space.
inline Membership update_membership(const ClassPlanes& prior, const ClassPlanes& distance) {
    Membership mem(prior.width, prior.height);
    for (std::size_t i = 0; i < mem.size(); ++i) {
        double s_u = std::log(prior.u[i]) - distance.u[i];
        double s_c = std::log(prior.c[i]) - distance.c[i];
        double m = std::max(s_u, s_c);
        double eu = std::exp(s_u - m);
        double ec = std::exp(s_c - m);
        mem.u[i] = eu / (eu + ec);
        mem.c[i] = ec / (eu + ec);
    }
    return mem;
}

// Membership-weighted mean/std per class; stds floored at sigma_floor.
inline ClassStats update_stats(const Membership& mem, const Raster& di) {
    if (mem.width != di.width || mem.height != di.height)
        throw DimensionMismatchError("update_stats: membership and DI disagree");
    auto one = [&](const std::vector<double>& u, double& mean, double& sd) {
        double w = 0.0, s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            w += u[i];
            s += u[i] * di.pixels[i];
        }
        if (!(w > 0.0))
            throw DegenerateInputError("update_stats: class has zero total membership");
        mean = s / w;
        double acc = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            acc += u[i] * (di.pixels[i] - mean) * (di.pixels[i] - mean);
        sd = std::max(std::sqrt(acc / w), sigma_floor);
    };
    ClassStats st;
    one(mem.u, st.mean_u, st.std_u);
    one(mem.c, st.mean_c, st.std_c);
    return st;
}

struct MrffcmState {
    Membership membership;
    ClassStats stats;
    ClassPlanes energy;
    ClassPlanes prior;
    ClassPlanes distance;
    double objective = 0.0;
    int iteration = 0;
};

struct MrffcmParams {
    double delta = 1e-3;  // stop when |J_k - J_{k-1}| <= delta * pixel count
    int max_iter = 100;
    double beta0 = 1.0;
    bool printed_energy_sign = false;
    // observer called after each membership/stats update
    std::function<void(const MrffcmState&)> on_iteration;
};

struct MrffcmResult {
    BinaryMap map;
    MrffcmState state;
    bool converged = false;
};

// MRF-regularized FCM. Initialization: K&I threshold for class stats plus an
// FCM pass for memberships and labels. Each iteration rebuilds neighborhood
// statistics, MRF energies, priors, and Gaussian distances, checks the
// objective against the stop rule, then updates memberships, stats, and hard
// labels. The class with the larger final mean is reported as changed. If the
// loop exhausts max_iter the lowest-objective state seen is returned with
// converged = false.
inline MrffcmResult mrffcm(const Raster& di, const MrffcmParams& params = {}) {
    if (params.max_iter < 1)
        throw std::invalid_argument("mrffcm: max_iter must be at least 1");
    require_finite(di, "mrffcm");

    double t = ki_threshold(di);
    ClassStats stats = init_class_stats(di, t);
    FcmResult init = fcm(di);
    Membership mem = std::move(init.membership);
    BinaryMap labels = std::move(init.map);

    double n = static_cast<double>(di.size());
    double j_prev = 0.0;
    bool have_prev = false;
    bool converged = false;

    MrffcmState cur;
    MrffcmState best;
    double best_j = std::numeric_limits<double>::infinity();

    for (int k = 1; k <= params.max_iter; ++k) {
        NeighborhoodStats ns = neighborhood_stats(mem, labels);
        ClassPlanes energy =
            mrf_energy(mem, ns.mean_partition, ns.number, params.beta0, params.printed_energy_sign);
        ClassPlanes prior = prior_probs(energy);
        ClassPlanes distance = conditional_distance(di, stats);
        double j = objective(mem, distance);

        cur = MrffcmState{mem, stats, energy, prior, distance, j, k};
        if (j < best_j) {
            best_j = j;
            best = cur;
        }
        if (have_prev && std::abs(j - j_prev) <= params.delta * n) {
            converged = true;
            break;
        }
        j_prev = j;
        have_prev = true;

        mem = update_membership(prior, distance);
        stats = update_stats(mem, di);
        labels = hard_labels(mem);
        if (params.on_iteration) {
            MrffcmState snap{mem, stats, std::move(energy), std::move(prior), std::move(distance),
                             j, k};
            params.on_iteration(snap);
        }
    }

    MrffcmResult res;
    res.converged = converged;
    res.state = converged ? std::move(cur) : std::move(best);
    if (res.state.stats.mean_c < res.state.stats.mean_u) {
        res.state.membership.u.swap(res.state.membership.c);
        res.state.energy.u.swap(res.state.energy.c);
        res.state.prior.u.swap(res.state.prior.c);
        res.state.distance.u.swap(res.state.distance.c);
        std::swap(res.state.stats.mean_u, res.state.stats.mean_c);
        std::swap(res.state.stats.std_u, res.state.stats.std_c);
    }
    res.map = hard_labels(res.state.membership);
    return res;
}

} // namespace sarcd
