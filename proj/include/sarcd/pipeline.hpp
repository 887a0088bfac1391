#pragma once

#include <algorithm>
#include <string>
#include <utility>

#include "sarcd/cluster.hpp"
#include "sarcd/diffgen.hpp"
#include "sarcd/raster.hpp"
#include "sarcd/srad.hpp"

namespace sarcd {

enum class DiOperator { LogRatio, GaussLogRatio };
enum class Denoiser { None, Srad };
enum class Classifier { Fcm, Mrffcm };

struct PipelineConfig {
    std::string name = "custom";
    DiOperator di_operator = DiOperator::GaussLogRatio;
    Denoiser denoise = Denoiser::Srad;
    Classifier classifier = Classifier::Mrffcm;
    SradParams srad;
    MrffcmParams mrffcm;
    double fcm_tol = 1e-4;
    int fcm_max_iter = 100;
};

// The three benchmark presets: the full pipeline, the same classifier on a
// plain log-ratio DI without denoising, and plain FCM on that DI.
inline PipelineConfig proposed_preset() {
    PipelineConfig c;
    c.name = "proposed";
    return c;
}

inline PipelineConfig baseline_mrffcm_preset() {
    PipelineConfig c;
    c.name = "baseline_mrffcm";
    c.di_operator = DiOperator::LogRatio;
    c.denoise = Denoiser::None;
    return c;
}

inline PipelineConfig fcm_preset() {
    PipelineConfig c;
    c.name = "fcm";
    c.di_operator = DiOperator::LogRatio;
    c.denoise = Denoiser::None;
    c.classifier = Classifier::Fcm;
    return c;
}

struct DetectResult {
    BinaryMap map;
    bool converged = true;
    int iterations = 0;
};

// DI generation, optional diffusion denoising, then two-class clustering.
// Inputs are normalized to [1, 256] ahead of the log operators; the DI is
// normalized to [1, 256] before diffusion (which needs positive input) and
// to [0, 255] for the classifier.
inline DetectResult detect(const Raster& before, const Raster& after,
                           const PipelineConfig& cfg) {
    require_same_shape(before, after, "detect");
    require_finite(before, "detect");
    require_finite(after, "detect");
    Raster x1 = normalize(before, 1.0, 256.0);
    Raster x2 = normalize(after, 1.0, 256.0);
    Raster di = cfg.di_operator == DiOperator::GaussLogRatio ? gauss_log_ratio(x1, x2)
                                                             : log_ratio(x1, x2);
    if (cfg.denoise == Denoiser::Srad)
        di = srad(normalize(di, 1.0, 256.0), cfg.srad);
    di = normalize(di, 0.0, 255.0);

    DetectResult res;
    // A constant DI (e.g. identical inputs) carries no evidence of change;
    // report everything unchanged instead of letting the classifier reject it.
    auto [mn, mx] = std::minmax_element(di.pixels.begin(), di.pixels.end());
    if (*mn == *mx) {
        res.map = BinaryMap(di.width, di.height);
        return res;
    }
    if (cfg.classifier == Classifier::Mrffcm) {
        MrffcmResult m = mrffcm(di, cfg.mrffcm);
        res.map = std::move(m.map);
        res.converged = m.converged;
        res.iterations = m.state.iteration;
    } else {
        FcmResult f = fcm(di, 2.0, cfg.fcm_tol, cfg.fcm_max_iter);
        res.map = std::move(f.map);
        res.iterations = f.iterations;
    }
    return res;
}

} // namespace sarcd
