#pragma once

#include "embanks/activation.hpp"
#include "embanks/clustering.hpp"
#include "embanks/engine.hpp"
#include "embanks/graph.hpp"
#include "embanks/ingest.hpp"
#include "embanks/keyword_index.hpp"
#include "embanks/scoring.hpp"
#include "embanks/search.hpp"
#include "embanks/storage.hpp"
#include "embanks/synth.hpp"
