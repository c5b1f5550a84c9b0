#pragma once

// Umbrella header for the whole library.

#include "tasselab/audit.hpp"
#include "tasselab/baselines.hpp"
#include "tasselab/dataset_io.hpp"
#include "tasselab/errors.hpp"
#include "tasselab/features.hpp"
#include "tasselab/image.hpp"
#include "tasselab/loss.hpp"
#include "tasselab/lottery.hpp"
#include "tasselab/model.hpp"
#include "tasselab/repro.hpp"
#include "tasselab/rng.hpp"
#include "tasselab/sha256.hpp"
#include "tasselab/simulate.hpp"
#include "tasselab/stats.hpp"
#include "tasselab/train.hpp"
