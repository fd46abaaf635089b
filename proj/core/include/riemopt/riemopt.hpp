#pragma once

#include "riemopt/directions.hpp"
#include "riemopt/error.hpp"
#include "riemopt/experiment.hpp"
#include "riemopt/linesearch.hpp"
#include "riemopt/manifold.hpp"
#include "riemopt/problems.hpp"
#include "riemopt/profile.hpp"
#include "riemopt/random.hpp"
#include "riemopt/solver.hpp"
