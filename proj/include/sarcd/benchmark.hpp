#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "sarcd/evalmetrics.hpp"
#include "sarcd/noise.hpp"
#include "sarcd/pipeline.hpp"
#include "sarcd/rng.hpp"
#include "sarcd/synthetic.hpp"

namespace sarcd {

struct BenchmarkPlan {
    int width = 256;
    int height = 256;
    int repeats = 5;
    std::uint64_t base_seed = 1;
    std::vector<double> salt_pepper_levels{0.05, 0.10, 0.15, 0.20};
    std::vector<double> speckle_levels{0.10, 0.20, 0.30, 0.40};
    std::vector<PipelineConfig> methods{proposed_preset(), baseline_mrffcm_preset(),
                                        fcm_preset()};
};

struct BenchRow {
    std::string method;
    NoiseKind kind = NoiseKind::SaltPepper;
    double level = 0.0;
    std::uint64_t seed = 0;  // pair seed, base_seed + repeat
    bool ok = false;
    std::string error;
    MetricReport metrics;
};

namespace detail {

inline std::string format_g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::uint64_t noise_seed(const BenchmarkPlan& plan, NoiseKind kind, double level,
                                int repeat, int image_index) {
    return derive_seed(plan.base_seed, static_cast<std::uint64_t>(kind),
                       std::bit_cast<std::uint64_t>(level), static_cast<std::uint64_t>(repeat),
                       static_cast<std::uint64_t>(image_index));
}

} // namespace detail

// One synthetic pair per repeat, noise drawn independently for each image of
// the pair, every method preset run against the same corrupted inputs. A
// failed run keeps its row with an error marker. Rows come back sorted by
// (method, noise kind, level, seed), making the output order independent of
// execution order.
inline std::vector<BenchRow> run_benchmark(const BenchmarkPlan& plan) {
    if (plan.repeats < 1)
        throw std::invalid_argument("run_benchmark: repeats must be at least 1");
    if (plan.methods.empty())
        throw std::invalid_argument("run_benchmark: no methods given");

    std::vector<BenchRow> rows;
    auto run_level = [&](NoiseKind kind, double level) {
        for (int rep = 0; rep < plan.repeats; ++rep) {
            std::uint64_t pair_seed = plan.base_seed + static_cast<std::uint64_t>(rep);
            SyntheticPair pair = make_synthetic_pair(plan.width, plan.height, pair_seed);
            NoiseSpec spec_before{kind, level, detail::noise_seed(plan, kind, level, rep, 0)};
            NoiseSpec spec_after{kind, level, detail::noise_seed(plan, kind, level, rep, 1)};
            Raster noisy_before = apply_noise(pair.before, spec_before);
            Raster noisy_after = apply_noise(pair.after, spec_after);
            for (const PipelineConfig& method : plan.methods) {
                BenchRow row;
                row.method = method.name;
                row.kind = kind;
                row.level = level;
                row.seed = pair_seed;
                try {
                    DetectResult det = detect(noisy_before, noisy_after, method);
                    row.metrics = evaluate(det.map, pair.reference);
                    row.ok = true;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
                rows.push_back(std::move(row));
            }
        }
    };
    for (double d : plan.salt_pepper_levels)
        run_level(NoiseKind::SaltPepper, d);
    for (double v : plan.speckle_levels)
        run_level(NoiseKind::Speckle, v);

    std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
        return std::tie(a.method, a.kind, a.level, a.seed) <
               std::tie(b.method, b.kind, b.level, b.seed);
    });
    return rows;
}

// CSV with a fixed header; metric fields of a failed run say "error" so the
// schema never changes shape.
inline std::string to_csv(const std::vector<BenchRow>& rows) {
    std::string out = "method,noise_kind,level,seed,oe,pcc,kc,rmse,psnr\n";
    for (const BenchRow& r : rows) {
        out += r.method;
        out += ',';
        out += noise_kind_name(r.kind);
        out += ',';
        out += detail::format_g6(r.level);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        if (r.ok) {
            out += detail::format_g6(r.metrics.oe_percent);
            out += ',';
            out += detail::format_g6(r.metrics.pcc_percent);
            out += ',';
            out += detail::format_g6(r.metrics.kc);
            out += ',';
            out += detail::format_g6(r.metrics.rmse);
            out += ',';
            out += detail::format_g6(r.metrics.psnr_db);
        } else {
            out += "error,error,error,error,error";
        }
        out += '\n';
    }
    return out;
}

// Plain-text table grouped by noise setting: methods as rows, averaged
// OE/PCC/KC/RMSE/PSNR as columns. Averages cover successful runs only;
// failures are counted in a footer.
inline std::string emit_summary(const std::vector<BenchRow>& rows) {
    if (rows.empty())
        throw std::invalid_argument("emit_summary: no rows");

    struct Acc {
        double oe = 0, pcc = 0, kc = 0, rmse = 0, psnr = 0;
        int n = 0;
    };
    // (kind, level) -> method -> accumulated metrics
    std::map<std::pair<int, double>, std::map<std::string, Acc>> groups;
    std::size_t failed = 0;
    for (const BenchRow& r : rows) {
        if (!r.ok) {
            ++failed;
            continue;
        }
        Acc& a = groups[{static_cast<int>(r.kind), r.level}][r.method];
        a.oe += r.metrics.oe_percent;
        a.pcc += r.metrics.pcc_percent;
        a.kc += r.metrics.kc;
        a.rmse += r.metrics.rmse;
        a.psnr += r.metrics.psnr_db;
        a.n += 1;
    }

    std::string out;
    char line[256];
    for (const auto& [key, methods] : groups) {
        const char* kind = noise_kind_name(static_cast<NoiseKind>(key.first));
        const char* param = key.first == static_cast<int>(NoiseKind::SaltPepper) ? "d" : "v";
        std::snprintf(line, sizeof(line), "%s %s=%s\n", kind, param,
                      detail::format_g6(key.second).c_str());
        out += line;
        std::snprintf(line, sizeof(line), "  %-18s %10s %10s %10s %10s %10s\n", "method", "OE",
                      "PCC", "KC", "RMSE", "PSNR");
        out += line;
        for (const auto& [name, a] : methods) {
            std::snprintf(line, sizeof(line), "  %-18s %10s %10s %10s %10s %10s\n", name.c_str(),
                          detail::format_g6(a.oe / a.n).c_str(),
                          detail::format_g6(a.pcc / a.n).c_str(),
                          detail::format_g6(a.kc / a.n).c_str(),
                          detail::format_g6(a.rmse / a.n).c_str(),
                          detail::format_g6(a.psnr / a.n).c_str());
            out += line;
        }
    }
    if (failed > 0) {
        std::snprintf(line, sizeof(line), "%zu failed run%s excluded from averages\n", failed,
                      failed == 1 ? "" : "s");
        out += line;
    }
    return out;
}

} // namespace sarcd
