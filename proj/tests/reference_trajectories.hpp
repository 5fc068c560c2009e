#pragma once

#include "polyccd/kinematics.hpp"

namespace polyccd::oracle {

/// Quadrotor segment T1 on [0, 3] in centimetres: the t^6 and t^7 coefficients
/// are the published ones, the rest follow from the boundary states
/// s_s = [300, 300, 300, 320, 0, 200, 0, 0, 0], s_g = [600, 650, 700, 0, ..., 0].
inline PolyVec3 quadrotor_t1() {
  return {Polynomial{300, 320, 0, -117.61222222222, 55.18925925926, -10.11444444444, 0.75, -0.02},
          Polynomial{300, 0, 0, 110.99962962963, -44.29481481481, 0.54197530864, 1.32, -0.07},
          Polynomial{300, 200, 0, 26.15481481481, -26.42481481481, 6.51913580247, -0.51, 0.01}};
}

inline constexpr double kGravityCm = 981.0;

}  // namespace polyccd::oracle
