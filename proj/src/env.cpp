#include "scrl/env.hpp"

#include <stdexcept>

#include "scrl/grasp_env.hpp"
#include "scrl/mobile_reach_env.hpp"

namespace scrl {

std::unique_ptr<Env> make_env(const std::string& name, const EnvConfig& config) {
  if (name == "mobile_reach_2d") return std::make_unique<MobileReachEnv>(config);
  if (name == "grasp_kinematic") return std::make_unique<GraspKinematicEnv>(config);
  throw std::invalid_argument("unknown env '" + name +
                              "' (expected mobile_reach_2d or grasp_kinematic)");
}

}  // namespace scrl
