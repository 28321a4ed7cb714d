#pragma once

#include "lgtbids/error.hpp"
#include "lgtbids/rng.hpp"
#include "lgtbids/format.hpp"
#include "lgtbids/topology.hpp"
#include "lgtbids/channel.hpp"
#include "lgtbids/attack.hpp"
#include "lgtbids/detector.hpp"
#include "lgtbids/metrics.hpp"
#include "lgtbids/scenario.hpp"
#include "lgtbids/simulation.hpp"
#include "lgtbids/report.hpp"
