#pragma once

// Everything in one include.

#include "causalnav/core/csv.hpp"
#include "causalnav/core/error.hpp"
#include "causalnav/core/log.hpp"
#include "causalnav/core/rng.hpp"
#include "causalnav/data/dataset.hpp"
#include "causalnav/env/coverage.hpp"
#include "causalnav/env/scenario.hpp"
#include "causalnav/graph/discovery.hpp"
#include "causalnav/graph/synthetic.hpp"
#include "causalnav/harness/config.hpp"
#include "causalnav/harness/experiment.hpp"
#include "causalnav/harness/metrics.hpp"
#include "causalnav/harness/report.hpp"
#include "causalnav/harness/results.hpp"
#include "causalnav/harness/scalability.hpp"
#include "causalnav/harness/sensitivity.hpp"
#include "causalnav/harness/stats.hpp"
#include "causalnav/harness/training.hpp"
#include "causalnav/infer/model.hpp"
#include "causalnav/infer/query.hpp"
#include "causalnav/plan/astar.hpp"
#include "causalnav/plan/decision.hpp"
#include "causalnav/plan/estimates.hpp"
#include "causalnav/sim/datagen.hpp"
#include "causalnav/sim/execute.hpp"
#include "causalnav/sim/timeseries_log.hpp"
