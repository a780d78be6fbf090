#pragma once

#include "hammerkit/errors.hpp"
#include "hammerkit/grid.hpp"
#include "hammerkit/grid_function.hpp"
#include "hammerkit/lp_space.hpp"
#include "hammerkit/lyapunov.hpp"
#include "hammerkit/operators.hpp"
#include "hammerkit/oracle.hpp"
#include "hammerkit/random.hpp"
#include "hammerkit/resolvent.hpp"
#include "hammerkit/run_config.hpp"
#include "hammerkit/schedules.hpp"
#include "hammerkit/solver.hpp"
#include "hammerkit/trace_io.hpp"
