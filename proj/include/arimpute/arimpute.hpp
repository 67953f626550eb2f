#pragma once

#include "arimpute/bench.hpp"
#include "arimpute/csv.hpp"
#include "arimpute/dataset.hpp"
#include "arimpute/error.hpp"
#include "arimpute/generate.hpp"
#include "arimpute/impute.hpp"
#include "arimpute/random.hpp"
#include "arimpute/rational.hpp"
#include "arimpute/rulemine.hpp"
