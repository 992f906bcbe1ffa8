#pragma once

#include "mutsamp/token.hpp"
#include "mutsamp/operators.hpp"
#include "mutsamp/mutant.hpp"
#include "mutsamp/result.hpp"
#include "mutsamp/store.hpp"
#include "mutsamp/rng.hpp"
#include "mutsamp/sampler.hpp"
#include "mutsamp/stats.hpp"
#include "mutsamp/analysis.hpp"
#include "mutsamp/synthgen.hpp"
#include "mutsamp/runner.hpp"
