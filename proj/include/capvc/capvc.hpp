#pragma once

#include "capvc/types.hpp"
#include "capvc/level_profile.hpp"
#include "capvc/potential.hpp"
#include "capvc/graph_state.hpp"
#include "capvc/weights.hpp"
#include "capvc/dynamic.hpp"
#include "capvc/static_greedy.hpp"
#include "capvc/extract.hpp"
#include "capvc/oracle.hpp"
#include "capvc/extensions.hpp"
