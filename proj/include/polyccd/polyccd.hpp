#pragma once

// Umbrella header: the whole engine plus the file-format harness.

#include "polyccd/baseline.hpp"
#include "polyccd/ccd.hpp"
#include "polyccd/error.hpp"
#include "polyccd/event_match.hpp"
#include "polyccd/geometry.hpp"
#include "polyccd/harness.hpp"
#include "polyccd/inequality_solver.hpp"
#include "polyccd/interpolation.hpp"
#include "polyccd/interval_set.hpp"
#include "polyccd/kinematics.hpp"
#include "polyccd/obstacles.hpp"
#include "polyccd/polynomial.hpp"
#include "polyccd/robot.hpp"
#include "polyccd/scenes.hpp"
#include "polyccd/sturm.hpp"
