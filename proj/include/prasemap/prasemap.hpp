#pragma once

// Alignment engine. The HTTP task service lives under prasemap/service/ and
// additionally needs nlohmann/json and cpp-httplib.

#include "prasemap/errors.hpp"
#include "prasemap/kg/io.hpp"
#include "prasemap/kg/knowledge_graph.hpp"
#include "prasemap/kg/normalize.hpp"
#include "prasemap/kg/stats.hpp"
#include "prasemap/pipeline/metrics.hpp"
#include "prasemap/pipeline/pipeline.hpp"
#include "prasemap/pr/config.hpp"
#include "prasemap/pr/export.hpp"
#include "prasemap/pr/feedback.hpp"
#include "prasemap/pr/functionality.hpp"
#include "prasemap/pr/mapping.hpp"
#include "prasemap/pr/reasoning.hpp"
#include "prasemap/pr/state.hpp"
#include "prasemap/se/adjacency.hpp"
#include "prasemap/se/embedding.hpp"
#include "prasemap/se/proposal.hpp"
#include "prasemap/se/trainer.hpp"
