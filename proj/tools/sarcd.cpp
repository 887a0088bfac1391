// Command-line front end: change detection on PGM pairs plus the synthetic
// noise benchmark.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sarcd.hpp"

namespace fs = std::filesystem;

namespace {

struct PipelineFlags {
    std::string preset = "proposed";
    std::string di;
    std::string denoise;
    std::string classifier;
    double beta0 = -1.0;
    double delta = -1.0;
    int max_iter = -1;
    int srad_iters = -1;
    double srad_dt = -1.0;
    bool printed_energy_sign = false;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f, bool with_preset) {
    if (with_preset)
        cmd->add_option("--preset", f.preset, "Starting preset: proposed, baseline_mrffcm, fcm")
            ->check(CLI::IsMember({"proposed", "baseline_mrffcm", "fcm"}));
    cmd->add_option("--di", f.di, "Difference operator: log_ratio or gauss_log_ratio")
        ->check(CLI::IsMember({"log_ratio", "gauss_log_ratio"}));
    cmd->add_option("--denoise", f.denoise, "Denoiser: none or srad")
        ->check(CLI::IsMember({"none", "srad"}));
    cmd->add_option("--classifier", f.classifier, "Classifier: fcm or mrffcm")
        ->check(CLI::IsMember({"fcm", "mrffcm"}));
    cmd->add_option("--beta0", f.beta0, "MRF spatial weight");
    cmd->add_option("--delta", f.delta, "Objective stop threshold per pixel");
    cmd->add_option("--max-iter", f.max_iter, "Classifier iteration cap");
    cmd->add_option("--srad-iters", f.srad_iters, "Diffusion iterations");
    cmd->add_option("--srad-dt", f.srad_dt, "Diffusion time step, (0, 0.5]");
    cmd->add_flag("--printed-energy-sign", f.printed_energy_sign,
                  "Use the additive spatial-energy sign");
}

sarcd::PipelineConfig make_config(const PipelineFlags& f) {
    sarcd::PipelineConfig cfg;
    if (f.preset == "baseline_mrffcm")
        cfg = sarcd::baseline_mrffcm_preset();
    else if (f.preset == "fcm")
        cfg = sarcd::fcm_preset();
    else
        cfg = sarcd::proposed_preset();
    if (!f.di.empty())
        cfg.di_operator = f.di == "log_ratio" ? sarcd::DiOperator::LogRatio
                                              : sarcd::DiOperator::GaussLogRatio;
    if (!f.denoise.empty())
        cfg.denoise = f.denoise == "none" ? sarcd::Denoiser::None : sarcd::Denoiser::Srad;
    if (!f.classifier.empty())
        cfg.classifier =
            f.classifier == "fcm" ? sarcd::Classifier::Fcm : sarcd::Classifier::Mrffcm;
    if (f.beta0 >= 0.0)
        cfg.mrffcm.beta0 = f.beta0;
    if (f.delta >= 0.0)
        cfg.mrffcm.delta = f.delta;
    if (f.max_iter > 0) {
        cfg.mrffcm.max_iter = f.max_iter;
        cfg.fcm_max_iter = f.max_iter;
    }
    if (f.srad_iters > 0)
        cfg.srad.iterations = f.srad_iters;
    if (f.srad_dt > 0.0)
        cfg.srad.dt = f.srad_dt;
    cfg.mrffcm.printed_energy_sign = f.printed_energy_sign;
    return cfg;
}

std::string metrics_csv(const sarcd::MetricReport& m) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "oe,pcc,kc,rmse,psnr\n%.6g,%.6g,%.6g,%.6g,%.6g\n",
                  m.oe_percent, m.pcc_percent, m.kc, m.rmse, m.psnr_db);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw sarcd::IoError("cannot write " + path.string());
}

// Feed a key=value file to the already-parsed subcommand. Options given on
// the command line are non-empty by now, so the file only fills the gaps;
// CLI11 never processes a config attached to a subcommand on its own.
void apply_config_file(CLI::App& cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw sarcd::IoError("cannot read config " + path);
    cmd.allow_config_extras(CLI::config_extras_mode::error);
    cmd.parse_from_stream(in);
}

int run_detect(const std::string& before_path, const std::string& after_path,
               const std::string& reference_path, const std::string& out_dir,
               const PipelineFlags& flags) {
    sarcd::Raster before = sarcd::load_pgm(before_path);
    sarcd::Raster after = sarcd::load_pgm(after_path);
    sarcd::PipelineConfig cfg = make_config(flags);
    sarcd::DetectResult det = sarcd::detect(before, after, cfg);

    std::string csv;
    if (!reference_path.empty()) {
        sarcd::BinaryMap reference = sarcd::to_binary_map(sarcd::load_pgm(reference_path));
        csv = metrics_csv(sarcd::evaluate(det.map, reference));
    }

    fs::create_directories(out_dir);
    sarcd::save_pgm(sarcd::to_raster(det.map), (fs::path(out_dir) / "change_map.pgm").string());
    if (!csv.empty()) {
        write_text(fs::path(out_dir) / "metrics.csv", csv);
        std::cout << csv;
    }
    if (!det.converged)
        std::cerr << "warning: classifier hit the iteration cap without converging\n";
    return 0;
}

int run_bench(const std::string& out_dir, std::uint64_t seed, int repeats, int width, int height,
              const std::vector<std::string>& methods, const PipelineFlags& flags) {
    sarcd::BenchmarkPlan plan;
    plan.base_seed = seed;
    plan.repeats = repeats;
    plan.width = width;
    plan.height = height;
    plan.methods.clear();
    for (const std::string& name : methods) {
        PipelineFlags f = flags;
        f.preset = name;
        plan.methods.push_back(make_config(f));
    }

    std::vector<sarcd::BenchRow> rows = sarcd::run_benchmark(plan);
    std::string csv = sarcd::to_csv(rows);
    std::string summary = sarcd::emit_summary(rows);

    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "results.csv", csv);
    write_text(fs::path(out_dir) / "summary.txt", summary);
    std::cout << summary;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Change detection for co-registered image pairs"};
    app.require_subcommand(1);

    std::string before_path, after_path, reference_path;
    std::string detect_out = "out";
    std::string detect_cfg;
    PipelineFlags detect_flags;
    CLI::App* detect = app.add_subcommand("detect", "Run one detection on a PGM pair");
    detect->add_option("--config", detect_cfg, "Read key=value defaults from a file (flags win)");
    detect->add_option("--before", before_path, "Earlier image (PGM)")->required();
    detect->add_option("--after", after_path, "Later image (PGM)")->required();
    detect->add_option("--reference", reference_path, "Ground-truth change map (PGM)");
    detect->add_option("--out-dir", detect_out, "Output directory")->envname("SARCD_OUT_DIR");
    add_pipeline_flags(detect, detect_flags, true);

    std::string bench_out = "out";
    std::string bench_cfg;
    std::uint64_t seed = 1;
    int repeats = 5, width = 256, height = 256;
    std::vector<std::string> methods{"proposed", "baseline_mrffcm", "fcm"};
    PipelineFlags bench_flags;
    CLI::App* bench = app.add_subcommand("bench", "Run the synthetic noise benchmark");
    bench->add_option("--config", bench_cfg, "Read key=value defaults from a file (flags win)");
    bench->add_option("--out-dir", bench_out, "Output directory")->envname("SARCD_OUT_DIR");
    bench->add_option("--seed", seed, "Base seed");
    bench->add_option("--repeats", repeats, "Noise repeats per level");
    bench->add_option("--width", width, "Synthetic image width");
    bench->add_option("--height", height, "Synthetic image height");
    bench
        ->add_option("--methods", methods,
                     "Comma-separated presets: proposed, baseline_mrffcm, fcm")
        ->delimiter(',')
        ->check(CLI::IsMember({"proposed", "baseline_mrffcm", "fcm"}));
    add_pipeline_flags(bench, bench_flags, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (detect->parsed()) {
            if (!detect_cfg.empty())
                apply_config_file(*detect, detect_cfg);
            return run_detect(before_path, after_path, reference_path, detect_out, detect_flags);
        }
        if (!bench_cfg.empty())
            apply_config_file(*bench, bench_cfg);
        return run_bench(bench_out, seed, repeats, width, height, methods, bench_flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
