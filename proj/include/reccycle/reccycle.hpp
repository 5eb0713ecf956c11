#pragma once

#include "reccycle/algorithms.hpp"
#include "reccycle/bpr.hpp"
#include "reccycle/cache.hpp"
#include "reccycle/core.hpp"
#include "reccycle/datasets.hpp"
#include "reccycle/experiment.hpp"
#include "reccycle/feasibility.hpp"
#include "reccycle/knn.hpp"
#include "reccycle/metrics.hpp"
#include "reccycle/provider.hpp"
#include "reccycle/report.hpp"
#include "reccycle/session.hpp"
