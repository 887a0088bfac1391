// End-to-end acceptance checks. Each test prints one [ACCEPT] verdict line so
// the suite's pass/fail record can be read off a plain log.
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "sarcd.hpp"
#include "test_util.hpp"

namespace {

using sarcd::BinaryMap;
using sarcd::Label;
using sarcd::Raster;

struct Verdict {
    int criterion;
    explicit Verdict(int n) : criterion(n) {}
    ~Verdict() {
        std::printf("[ACCEPT] criterion %d: %s\n", criterion,
                    ::testing::Test::HasFailure() ? "FAIL" : "PASS");
        std::fflush(stdout);
    }
};

Raster bimodal_raster(int w, int h, double lo, double hi, sarcd::Rng& rng) {
    Raster r(w, h);
    for (auto& p : r.pixels)
        p = rng.below(2) ? rng.uniform(hi - 2.0, hi + 2.0) : rng.uniform(lo - 2.0, lo + 2.0);
    return r;
}

// Published accuracy tables print RMSE to three decimals, so each PSNR value
// is only pinned down to the interval the rounded RMSE implies. The plain-MRF
// rows all land within 0.05 dB outright; the sharper (small RMSE) rows need
// the rounding slack. One published pair (0.109, 68.067) disagrees with its
// own RMSE by 0.7 dB, beyond any rounding explanation, and is left out.
TEST(Acceptance, Criterion1PublishedPsnrPairs) {
    Verdict verdict(1);
    struct Pair {
        double rmse;
        double psnr;
        bool strict;
    };
    const Pair pairs[] = {
        {0.298, 58.663, true},  {0.879, 49.245, true},  {1.596, 44.069, true},
        {2.366, 40.652, true},  {0.0, 99.0, true},      {0.058, 72.897, true},
        {0.379, 56.544, true},  {0.700, 51.238, true},  {0.047, 74.742, false},
        {0.063, 72.179, false}, {0.083, 69.759, false}, {0.006, 92.969, false},
        {0.081, 69.980, false},
    };
    for (const Pair& p : pairs) {
        double got = sarcd::psnr(p.rmse);
        if (p.rmse == 0.0) {
            EXPECT_DOUBLE_EQ(got, 99.0);
            continue;
        }
        double slack = 20.0 * std::log10(p.rmse / (p.rmse - 0.0005));
        EXPECT_NEAR(got, p.psnr, std::max(0.05, slack)) << "rmse " << p.rmse;
        if (p.strict)
            EXPECT_NEAR(got, p.psnr, 0.05) << "rmse " << p.rmse;
    }
}

TEST(Acceptance, Criterion2MetricIdentities) {
    Verdict verdict(2);
    sarcd::Rng rng(2026);
    const int w = 40, h = 25;
    for (int t = 0; t < 10000; ++t) {
        sarcd::ConfusionCounts c;
        c.tp = rng.below(500);
        c.tn = rng.below(500);
        c.fp = rng.below(500);
        c.fn = rng.below(500);
        if (c.total() == 0)
            c.tn = 1;
        EXPECT_EQ(sarcd::oe(c) + sarcd::pcc(c), 100.0);

        sarcd::ConfusionCounts perfect;
        perfect.tp = rng.below(499) + 1;
        perfect.tn = rng.below(499) + 1;
        EXPECT_EQ(sarcd::kappa(perfect), 1.0);

        BinaryMap map(w, h), ref(w, h);
        std::uint64_t disagree = 0;
        for (std::size_t i = 0; i < map.labels.size(); ++i) {
            map.labels[i] = static_cast<Label>(rng.below(2));
            ref.labels[i] = static_cast<Label>(rng.below(2));
            if (map.labels[i] != ref.labels[i])
                ++disagree;
        }
        double r = sarcd::rmse(map, ref);
        EXPECT_NEAR(r * r * static_cast<double>(w * h), static_cast<double>(disagree),
                    1e-9 * std::max<double>(1.0, static_cast<double>(disagree)));
    }
}

TEST(Acceptance, Criterion3SmoothingKernelGolden) {
    Verdict verdict(3);
    sarcd::Kernel3x3 k = sarcd::gaussian_kernel();
    EXPECT_NEAR(k.at(0, 0), 0.619347, 1e-5);
    for (auto [dr, dc] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}})
        EXPECT_NEAR(k.at(dr, dc), 0.083820, 1e-5);
    for (auto [dr, dc] : {std::pair{-1, -1}, {-1, 1}, {1, -1}, {1, 1}})
        EXPECT_NEAR(k.at(dr, dc), 0.011342, 1e-5);
    double sum = 0.0;
    for (double wgt : k.weights)
        sum += wgt;
    EXPECT_NEAR(sum, 1.0, 1e-12);
}

// A noise-free pair is expected to come back pixel-perfect from the full
// pipeline. The smoothing difference operator still rings for a couple of
// pixels around each changed region, so today this does not hold; the check
// stays strict rather than being loosened to match the implementation.
TEST(Acceptance, Criterion4CleanPairExactness) {
    Verdict verdict(4);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        sarcd::SyntheticPair pair = sarcd::make_synthetic_pair(96, 96, seed);
        sarcd::DetectResult det = sarcd::detect(pair.before, pair.after, sarcd::proposed_preset());
        sarcd::MetricReport m = sarcd::evaluate(det.map, pair.reference);
        EXPECT_DOUBLE_EQ(m.pcc_percent, 100.0) << "seed " << seed;
        EXPECT_DOUBLE_EQ(m.kc, 1.0) << "seed " << seed;
        EXPECT_DOUBLE_EQ(m.oe_percent, 0.0) << "seed " << seed;
    }
}

TEST(Acceptance, Criterion5LowSpeckleNearPerfection) {
    Verdict verdict(5);
    sarcd::BenchmarkPlan plan;
    plan.salt_pepper_levels = {};
    plan.speckle_levels = {0.10};
    plan.methods = {sarcd::proposed_preset()};
    std::vector<sarcd::BenchRow> rows = sarcd::run_benchmark(plan);
    ASSERT_EQ(rows.size(), 5u);
    double sum_oe = 0.0, sum_kc = 0.0;
    for (const sarcd::BenchRow& r : rows) {
        ASSERT_TRUE(r.ok) << r.error;
        sum_oe += r.metrics.oe_percent;
        sum_kc += r.metrics.kc;
    }
    EXPECT_LE(sum_oe / 5.0, 0.5);
    EXPECT_GE(sum_kc / 5.0, 0.95);
}

TEST(Acceptance, Criterion6OrderingAgainstBaseline) {
    Verdict verdict(6);
    sarcd::BenchmarkPlan plan;
    plan.salt_pepper_levels = {0.10, 0.20};
    plan.speckle_levels = {0.30, 0.40};
    plan.methods = {sarcd::proposed_preset(), sarcd::baseline_mrffcm_preset()};
    std::vector<sarcd::BenchRow> rows = sarcd::run_benchmark(plan);
    ASSERT_EQ(rows.size(), 2u * 4u * 5u);

    struct Avg {
        double oe = 0.0, kc = 0.0;
        int n = 0;
    };
    std::map<std::tuple<int, double, std::string>, Avg> acc;
    for (const sarcd::BenchRow& r : rows) {
        ASSERT_TRUE(r.ok) << r.method << " " << r.level << ": " << r.error;
        Avg& a = acc[{static_cast<int>(r.kind), r.level, r.method}];
        a.oe += r.metrics.oe_percent;
        a.kc += r.metrics.kc;
        ++a.n;
    }
    for (auto kind : {sarcd::NoiseKind::SaltPepper, sarcd::NoiseKind::Speckle}) {
        const auto& levels = kind == sarcd::NoiseKind::SaltPepper ? plan.salt_pepper_levels
                                                                  : plan.speckle_levels;
        for (double level : levels) {
            const Avg& prop = acc[{static_cast<int>(kind), level, "proposed"}];
            const Avg& base = acc[{static_cast<int>(kind), level, "baseline_mrffcm"}];
            ASSERT_EQ(prop.n, 5);
            ASSERT_EQ(base.n, 5);
            EXPECT_LT(prop.oe / 5.0, base.oe / 5.0) << "level " << level;
            EXPECT_GT(prop.kc / 5.0, base.kc / 5.0) << "level " << level;
        }
    }
}

TEST(Acceptance, Criterion7DiffusionProperties) {
    Verdict verdict(7);

    // constant rasters are a bit-exact fixed point
    Raster flat(24, 24, 7.25);
    sarcd::SradParams few;
    few.iterations = 5;
    Raster out = sarcd::srad(flat, few);
    for (double p : out.pixels)
        EXPECT_EQ(p, 7.25);

    // positive rescaling commutes with the filter
    sarcd::Rng rng(7);
    Raster base(32, 32);
    for (auto& p : base.pixels)
        p = rng.uniform(1.0, 255.0);
    sarcd::SradParams ten;
    ten.iterations = 10;
    Raster ref = sarcd::srad(base, ten);
    for (double lambda : {0.5, 2.0, 10.0}) {
        Raster scaled = base;
        for (auto& p : scaled.pixels)
            p *= lambda;
        Raster got = sarcd::srad(scaled, ten);
        for (std::size_t i = 0; i < got.size(); ++i) {
            double want = lambda * ref.pixels[i];
            EXPECT_NEAR(got.pixels[i], want, 1e-6 * std::max(1.0, std::abs(want)));
        }
    }

    // fuzz: output stays finite for arbitrary positive input
    sarcd::Rng fuzz(99);
    const double dts[] = {0.5, 0.25, 0.05};
    for (int t = 0; t < 1000; ++t) {
        Raster r(16 + static_cast<int>(fuzz.below(33)), 16 + static_cast<int>(fuzz.below(33)));
        for (auto& p : r.pixels)
            p = fuzz.uniform(0.5, 255.5);
        sarcd::SradParams sp;
        sp.iterations = 3;
        sp.dt = dts[t % 3];
        Raster s = sarcd::srad(r, sp);
        for (double p : s.pixels)
            ASSERT_TRUE(std::isfinite(p)) << "size " << r.width << "x" << r.height;
    }

    // a lone spike loses amplitude in a single step
    Raster spike(16, 16, 100.0);
    spike.at(8, 8) = 200.0;
    sarcd::SradParams one;
    one.iterations = 1;
    Raster after = sarcd::srad(spike, one);
    EXPECT_LT(after.at(8, 8), 200.0);
    EXPECT_LT(*std::max_element(after.pixels.begin(), after.pixels.end()), 200.0);
}

TEST(Acceptance, Criterion8ClusteringProperties) {
    Verdict verdict(8);

    // membership stays a partition of unity on every iteration
    {
        sarcd::Rng rng(21);
        Raster di = bimodal_raster(48, 48, 40.0, 210.0, rng);
        int seen = 0;
        sarcd::MrffcmParams params;
        params.on_iteration = [&seen](const sarcd::MrffcmState& s) {
            ++seen;
            for (std::size_t i = 0; i < s.membership.size(); ++i) {
                double u = s.membership.u[i], c = s.membership.c[i];
                ASSERT_GE(u, 0.0);
                ASSERT_GE(c, 0.0);
                ASSERT_NEAR(u + c, 1.0, 1e-9);
            }
        };
        sarcd::mrffcm(di, params);
        EXPECT_GE(seen, 1);
    }

    // terminates within the iteration budget on arbitrary input
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        sarcd::Rng rng(seed * 127 + 3);
        Raster di(16, 16);
        for (auto& p : di.pixels)
            p = rng.uniform(0.0, 255.0);
        sarcd::MrffcmResult res = sarcd::mrffcm(di);
        EXPECT_GE(res.state.iteration, 1);
        EXPECT_LE(res.state.iteration, sarcd::MrffcmParams{}.max_iter);
    }

    // with the spatial weight off, labels agree with the per-class
    // Gaussian-likelihood decision at the converged statistics
    for (std::uint64_t seed = 300; seed < 310; ++seed) {
        sarcd::Rng rng(seed);
        double lo = rng.uniform(15.0, 60.0);
        double hi = rng.uniform(180.0, 245.0);
        Raster di = bimodal_raster(32, 32, lo, hi, rng);
        sarcd::MrffcmParams params;
        params.beta0 = 0.0;
        sarcd::MrffcmResult res = sarcd::mrffcm(di, params);
        sarcd::ClassPlanes d = sarcd::conditional_distance(di, res.state.stats);
        int mismatches = 0;
        for (std::size_t i = 0; i < di.size(); ++i) {
            Label want = d.c[i] < d.u[i] ? Label::changed : Label::unchanged;
            if (res.map.labels[i] != want)
                ++mismatches;
        }
        EXPECT_EQ(mismatches, 0) << "seed " << seed;
    }

    // spatial context flips isolated off-class pixels that plain FCM keeps
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        testutil::LonePixelDi fixture = testutil::make_lone_pixel_di(seed);
        ASSERT_EQ(fixture.lone.size(), 20u);
        BinaryMap fcm_map = sarcd::fcm(fixture.di).map;
        BinaryMap mrf_map = sarcd::mrffcm(fixture.di).map;
        int fcm_flips = 0, mrf_flips = 0;
        for (const auto& [i, j] : fixture.lone) {
            if (fcm_map.at(i, j) == Label::unchanged)
                ++fcm_flips;
            if (mrf_map.at(i, j) == Label::unchanged)
                ++mrf_flips;
        }
        EXPECT_GT(mrf_flips, fcm_flips) << "seed " << seed;
    }
}

TEST(Acceptance, Criterion9DeterministicBenchmark) {
    Verdict verdict(9);
    sarcd::BenchmarkPlan plan;
    plan.width = 64;
    plan.height = 64;
    plan.repeats = 2;
    plan.base_seed = 7;
    plan.salt_pepper_levels = {0.05, 0.15};
    plan.speckle_levels = {0.10};
    std::string first = sarcd::to_csv(sarcd::run_benchmark(plan));
    std::string second = sarcd::to_csv(sarcd::run_benchmark(plan));
    ASSERT_FALSE(first.empty());
    EXPECT_EQ(first, second);
}

} // namespace
