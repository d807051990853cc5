#pragma once

#include "castnet/centrality.hpp"
#include "castnet/community.hpp"
#include "castnet/error.hpp"
#include "castnet/graph.hpp"
#include "castnet/graph_io.hpp"
#include "castnet/ingest.hpp"
#include "castnet/linkpred.hpp"
#include "castnet/output.hpp"
#include "castnet/paths.hpp"
#include "castnet/records_io.hpp"
#include "castnet/stats.hpp"
