#pragma once

#include "mrnews/benchmark.hpp"
#include "mrnews/calibration.hpp"
#include "mrnews/config.hpp"
#include "mrnews/error.hpp"
#include "mrnews/indicators.hpp"
#include "mrnews/jump_test.hpp"
#include "mrnews/market_data.hpp"
#include "mrnews/mrn.hpp"
#include "mrnews/pipeline.hpp"
#include "mrnews/recurrence.hpp"
#include "mrnews/recurrence_io.hpp"
#include "mrnews/simulation.hpp"
