#pragma once

#include "itree/audit.hpp"
#include "itree/embed_search.hpp"
#include "itree/experiment.hpp"
#include "itree/generators.hpp"
#include "itree/graph.hpp"
#include "itree/io.hpp"
#include "itree/log_real.hpp"
#include "itree/moments.hpp"
#include "itree/overlap.hpp"
#include "itree/parallel.hpp"
#include "itree/rng.hpp"
#include "itree/structure.hpp"
