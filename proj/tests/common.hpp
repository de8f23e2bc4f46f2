#pragma once

#include "plate/params.hpp"

namespace plate::test {

/// Reference profile with theta = xi = 0.
inline DimensionlessParams zero_flow_profile() {
  ParamOverrides o;
  o.eps = 3.0;
  o.mu1 = 1.8;
  o.mu2 = 0.2;
  o.a = 0.2;
  o.theta = 0.0;
  o.xi = 0.0;
  o.L = 9.0;
  return nondimensionalize(PhysicalParams{}, o);
}

}  // namespace plate::test
