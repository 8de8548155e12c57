#pragma once

#include <string>

namespace rtplan {

struct GeneratedInstance {
  std::string domain;
  std::string problem;
};

// Two rooms, two grippers, n balls starting in room A with goal room B.
GeneratedInstance generate_gripper(int n);
// One ferry of capacity 1, two locations, n cars from loc1 to loc2.
GeneratedInstance generate_ferry(int n);

}  // namespace rtplan
