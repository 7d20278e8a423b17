// Umbrella header for the whole library.

#pragma once

#include "eda/config.hpp"
#include "eda/harness.hpp"
#include "eda/order_stats.hpp"
#include "eda/presets.hpp"
#include "eda/protocol.hpp"
#include "eda/reporting.hpp"
#include "eda/rng.hpp"
#include "eda/runner.hpp"
#include "eda/transaction.hpp"
