#pragma once

#include <Eigen/Core>

#include "scrl/env.hpp"
#include "scrl/rng.hpp"

namespace scrl {

// Four-stage tabletop grasp with a kinematic arm: hover above the box,
// orient the wrist downward, lower, close. The base frame is rotated +90
// degrees about the vertical relative to the world frame, so armx moves the
// end effector along world y and army along world x. Horizontal reach along
// base x shares a disc budget with height, so pushing x outward forces the
// height down (the armx -> r_eefz1 coupling); base y rides a separate rail.
class GraspKinematicEnv final : public Env {
 public:
  explicit GraspKinematicEnv(const EnvConfig& config);

  std::string name() const override { return "grasp_kinematic"; }
  const EnvConfig& config() const override { return config_; }
  const StagedTaskSpec& task_spec() const override { return task_spec_; }
  int observation_dim() const override { return 11; }

  Vec reset() override;
  Vec reset_to_stage(int stage) override;
  Transition step(const Vec& action) override;
  int stage_of(const Vec& observation) const override;
  CausalMatrix ground_truth_matrix(int stage) const override;
  int episode_steps() const override { return steps_; }
  std::unique_ptr<Env> clone_with_seed(uint64_t seed) const override;

  Eigen::Vector3d eef_pos() const { return eef_pos_; }
  Eigen::Vector3d eef_tilt() const { return tilt_; }  // pitch, roll, yaw
  Eigen::Vector3d box_pos() const { return box_pos_; }
  double hover_z() const { return box_pos_.z() + hover_height_; }
  bool gripper_closed() const { return gripper_closed_; }

  // The arm shoulder sits on a y rail at (0, eef_y, 0); the x-z distance from
  // it to the end effector never exceeds kReach.
  static constexpr double kReach = 1.0;
  static constexpr double kRailHalf = 0.3;  // |y| limit

 private:
  Vec observation() const;
  void place_for_stage(int stage);

  EnvConfig config_;
  StagedTaskSpec task_spec_;
  Rng rng_;
  int steps_ = 0;

  Eigen::Vector3d eef_pos_{0.4, 0.0, 0.5};   // base frame, shoulder at origin
  Eigen::Vector3d tilt_{0.0, 0.0, 0.0};      // pitch, roll, yaw vs downward
  bool gripper_closed_ = false;
  Eigen::Vector3d box_pos_{0.75, 0.0, 0.1};  // box top center, base frame
  double hover_height_ = 0.3;
};

}  // namespace scrl
