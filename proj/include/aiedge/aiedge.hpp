#pragma once

#include "aiedge/rng.hpp"
#include "aiedge/format.hpp"
#include "aiedge/latency_model.hpp"
#include "aiedge/topology.hpp"
#include "aiedge/workload.hpp"
#include "aiedge/lru.hpp"
#include "aiedge/vector_index.hpp"
#include "aiedge/semantic_cache.hpp"
#include "aiedge/policies.hpp"
#include "aiedge/scenario.hpp"
#include "aiedge/engine.hpp"
#include "aiedge/report.hpp"
#include "aiedge/config.hpp"
#include "aiedge/runner.hpp"
