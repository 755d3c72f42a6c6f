#pragma once

#include "ocf/algorithms.hpp"
#include "ocf/bench.hpp"
#include "ocf/engine.hpp"
#include "ocf/game.hpp"
#include "ocf/identities.hpp"
#include "ocf/instance_io.hpp"
#include "ocf/instances.hpp"
#include "ocf/oracles.hpp"
#include "ocf/report.hpp"
#include "ocf/suites.hpp"
#include "ocf/weight.hpp"
