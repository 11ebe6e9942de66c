#pragma once

#include "bddg/assignment.hpp"
#include "bddg/geometry.hpp"
#include "bddg/oracle.hpp"
#include "bddg/scenario.hpp"
#include "bddg/sim.hpp"
#include "bddg/state.hpp"
#include "bddg/strategy.hpp"
#include "bddg/value.hpp"
