#pragma once

#include "rqm/brute_force.hpp"
#include "rqm/checks.hpp"
#include "rqm/datagen.hpp"
#include "rqm/diagnostics.hpp"
#include "rqm/error.hpp"
#include "rqm/experiment.hpp"
#include "rqm/huber.hpp"
#include "rqm/problem.hpp"
#include "rqm/prox.hpp"
#include "rqm/random.hpp"
#include "rqm/schedules.hpp"
#include "rqm/solver_rqm.hpp"
#include "rqm/solver_srsg.hpp"
#include "rqm/trace.hpp"
#include "rqm/trials.hpp"
#include "rqm/types.hpp"
