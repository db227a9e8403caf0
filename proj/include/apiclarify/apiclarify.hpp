#pragma once

// Umbrella header.

#include "annotate.hpp"
#include "dialogue.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "fqn.hpp"
#include "ingest.hpp"
#include "kg.hpp"
#include "kg_io.hpp"
#include "recommend.hpp"
#include "retrieval.hpp"
#include "service.hpp"
#include "text.hpp"
