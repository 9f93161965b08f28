#pragma once

#include "outlier_perf/errors.hpp"
#include "outlier_perf/fixtures.hpp"
#include "outlier_perf/indicators.hpp"
#include "outlier_perf/ingest.hpp"
#include "outlier_perf/number_format.hpp"
#include "outlier_perf/outliers.hpp"
#include "outlier_perf/pipeline.hpp"
#include "outlier_perf/random.hpp"
#include "outlier_perf/record.hpp"
#include "outlier_perf/report.hpp"
#include "outlier_perf/stats.hpp"
