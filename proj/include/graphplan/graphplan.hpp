#pragma once

#include "graphplan/coherence.hpp"
#include "graphplan/config.hpp"
#include "graphplan/corpus.hpp"
#include "graphplan/error.hpp"
#include "graphplan/event.hpp"
#include "graphplan/graph.hpp"
#include "graphplan/lexicon.hpp"
#include "graphplan/metrics.hpp"
#include "graphplan/pipeline.hpp"
#include "graphplan/planner.hpp"
#include "graphplan/random.hpp"
#include "graphplan/realizer.hpp"
#include "graphplan/stemmer.hpp"
#include "graphplan/text.hpp"
#include "graphplan/topics.hpp"
