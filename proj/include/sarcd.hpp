#pragma once

#include "sarcd/benchmark.hpp"
#include "sarcd/cluster.hpp"
#include "sarcd/diffgen.hpp"
#include "sarcd/errors.hpp"
#include "sarcd/evalmetrics.hpp"
#include "sarcd/noise.hpp"
#include "sarcd/pgm.hpp"
#include "sarcd/pipeline.hpp"
#include "sarcd/raster.hpp"
#include "sarcd/rng.hpp"
#include "sarcd/srad.hpp"
#include "sarcd/synthetic.hpp"
