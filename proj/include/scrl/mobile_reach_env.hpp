#pragma once

#include <Eigen/Core>

#include "scrl/env.hpp"
#include "scrl/rng.hpp"

namespace scrl {

// Planar mobile base with a box-limited arm reaching for a world-frame
// target. Three stages: navigate (r_rho), face (r_theta), reach
// (r_eefx/y/z). Presets:
//   coupled   - the turn command is applied before the translation, so
//               turning redirects the step's base motion (turn -> r_rho).
//   decoupled - translation uses the pre-turn heading and stage 3 freezes
//               the base, leaving arm-only reach dynamics.
class MobileReachEnv final : public Env {
 public:
  explicit MobileReachEnv(const EnvConfig& config);

  std::string name() const override { return "mobile_reach_2d"; }
  const EnvConfig& config() const override { return config_; }
  const StagedTaskSpec& task_spec() const override { return task_spec_; }
  int observation_dim() const override { return 10; }

  Vec reset() override;
  Vec reset_to_stage(int stage) override;
  Transition step(const Vec& action) override;
  int stage_of(const Vec& observation) const override;
  CausalMatrix ground_truth_matrix(int stage) const override;
  int episode_steps() const override { return steps_; }
  std::unique_ptr<Env> clone_with_seed(uint64_t seed) const override;

  // state accessors used by tests
  Eigen::Vector2d base_xy() const { return base_xy_; }
  double heading() const { return heading_; }
  Eigen::Vector3d eef_offset() const { return eef_offset_; }
  Eigen::Vector3d target() const { return target_; }
  Eigen::Vector3d eef_world() const;

 private:
  Vec observation() const;
  double rho() const;
  double bearing() const;  // theta, wrapped
  void place_for_stage(int stage);

  EnvConfig config_;
  StagedTaskSpec task_spec_;
  Rng rng_;
  int steps_ = 0;

  Eigen::Vector2d base_xy_{5.0, 5.0};
  double heading_ = 0.0;
  Eigen::Vector3d eef_offset_{0.4, 0.0, 0.7};
  Eigen::Vector3d target_{8.0, 5.0, 0.7};
  Eigen::Vector2d last_speeds_{0.0, 0.0};
};

}  // namespace scrl
