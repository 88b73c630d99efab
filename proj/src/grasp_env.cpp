#include "scrl/grasp_env.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scrl {

namespace {

constexpr double kTiltLimit = 1.5;  // rad, per axis
constexpr double kArmXLo = 0.05, kArmXHi = 0.95;

// The shoulder rides the y rail with the carriage, so the reach budget is a
// disc of radius kReach in the carriage's x-z plane; y never enters it.
constexpr double kDiscRadius = GraspKinematicEnv::kReach;

}  // namespace

GraspKinematicEnv::GraspKinematicEnv(const EnvConfig& config)
    : config_(config), rng_(Rng::derive(config.seed, "grasp_kinematic")) {
  EnvConfig check = config_;
  check.preset = "coupled";  // preset is a mobile-task knob
  check.validate();
  task_spec_.n_stages = 4;
  task_spec_.action_names = {"armx", "army", "armz", "armrx",
                             "armry", "armrz", "grip"};
  task_spec_.reward_names = {"r_eefx",       "r_eefy",       "r_eefz1",
                             "r_ori",        "r_eefz2",      "r_gripper_s1",
                             "r_gripper_s2", "r_gripper_s3", "r_gripper",
                             "pen_reach",    "pen_table",    "r_stage_bonus"};
  task_spec_.stage_rewards = {{0, 1, 2, 5}, {3, 6}, {4, 7}, {8}};
  task_spec_.penalty_rewards = {9, 10, 11};
  task_spec_.validate();
}

Vec GraspKinematicEnv::observation() const {
  Vec obs(11);
  obs << box_pos_.x(), box_pos_.y(), box_pos_.z(), eef_pos_.x(), eef_pos_.y(),
      eef_pos_.z(), hover_z(), tilt_.x(), tilt_.y(), tilt_.z(),
      gripper_closed_ ? 1.0 : 0.0;
  return obs;
}

int GraspKinematicEnv::stage_of(const Vec& obs) const {
  if (obs.size() != observation_dim())
    throw std::invalid_argument("observation has wrong dimension");
  const double horiz = std::hypot(obs[3] - obs[0], obs[4] - obs[1]);
  const double z = obs[5];
  const double hover = obs[6];
  const double ori = std::hypot(obs[7], obs[8]);
  const bool s1 = horiz <= config_.horizontal_tol && z <= hover + config_.horizontal_tol;
  const bool s2 = s1 && ori <= config_.orientation_tol;
  const bool s3 = s2 && (z - obs[2]) <= config_.lower_tol;
  return 1 + int(s1) + int(s2) + int(s3);
}

Vec GraspKinematicEnv::reset() { return reset_to_stage(1); }

void GraspKinematicEnv::place_for_stage(int stage) {
  box_pos_ = {rng_.uniform(0.70, 0.80), rng_.uniform(-0.15, 0.15), 0.1};
  hover_height_ = 0.3;
  gripper_closed_ = false;

  const double hz = hover_z();
  switch (stage) {
    case 1:
      eef_pos_ = {rng_.uniform(0.15, 0.85), rng_.uniform(-0.25, 0.25),
                  rng_.uniform(0.1, 0.55)};
      tilt_ = {rng_.uniform(-0.5, 0.5), rng_.uniform(-0.5, 0.5),
               rng_.uniform(-0.5, 0.5)};
      break;
    case 2: {
      eef_pos_ = {box_pos_.x() + rng_.uniform(-0.8, 0.8) * config_.horizontal_tol,
                  box_pos_.y() + rng_.uniform(-0.8, 0.8) * config_.horizontal_tol,
                  hz + rng_.uniform(-0.8, 0.8) * config_.horizontal_tol};
      const double ori = rng_.uniform(1.5 * config_.orientation_tol, 0.8);
      const double dir = rng_.uniform(0.0, 2.0 * std::numbers::pi);
      tilt_ = {ori * std::cos(dir), ori * std::sin(dir), rng_.uniform(-0.5, 0.5)};
      break;
    }
    case 3: {
      eef_pos_ = {box_pos_.x() + rng_.uniform(-0.8, 0.8) * config_.horizontal_tol,
                  box_pos_.y() + rng_.uniform(-0.8, 0.8) * config_.horizontal_tol,
                  rng_.uniform(box_pos_.z() + 2.0 * config_.lower_tol, hz)};
      const double ori = rng_.uniform(0.0, 0.8) * config_.orientation_tol;
      const double dir = rng_.uniform(0.0, 2.0 * std::numbers::pi);
      tilt_ = {ori * std::cos(dir), ori * std::sin(dir), rng_.uniform(-0.5, 0.5)};
      break;
    }
    case 4: {
      eef_pos_ = {box_pos_.x() + rng_.uniform(-0.6, 0.6) * config_.horizontal_tol,
                  box_pos_.y() + rng_.uniform(-0.6, 0.6) * config_.horizontal_tol,
                  box_pos_.z() + rng_.uniform(0.1, 0.9) * config_.lower_tol};
      const double ori = rng_.uniform(0.0, 0.8) * config_.orientation_tol;
      const double dir = rng_.uniform(0.0, 2.0 * std::numbers::pi);
      tilt_ = {ori * std::cos(dir), ori * std::sin(dir), rng_.uniform(-0.5, 0.5)};
      break;
    }
    default:
      throw std::invalid_argument("stage out of range");
  }
}

Vec GraspKinematicEnv::reset_to_stage(int stage) {
  if (stage < 1 || stage > 4)
    throw std::invalid_argument("grasp_kinematic has stages 1..4");
  for (int attempt = 0; attempt < 64; ++attempt) {
    place_for_stage(stage);
    steps_ = 0;
    Vec obs = observation();
    if (stage_of(obs) == stage) return obs;
  }
  throw std::runtime_error("could not reach requested stage distribution");
}

Transition GraspKinematicEnv::step(const Vec& action) {
  if (action.size() != 7)
    throw std::invalid_argument("grasp_kinematic expects 7 action dimensions");
  const Vec a = clamp_action(action);

  Transition tr;
  tr.state = observation();
  tr.action = a;
  tr.stage = stage_of(tr.state);

  // distances before; world x tracks base y and world y tracks base x
  const double dx = std::abs(eef_pos_.y() - box_pos_.y());
  const double dy = std::abs(eef_pos_.x() - box_pos_.x());
  const double dz1 = std::abs(eef_pos_.z() - hover_z());
  const double dori = std::hypot(tilt_.x(), tilt_.y());
  const double dz2 = std::abs(eef_pos_.z() - box_pos_.z());

  double pen_reach = 0.0, pen_table = 0.0;

  Eigen::Vector3d p = eef_pos_ + config_.gain_translate *
                                     Eigen::Vector3d{a[0], a[1], a[2]};
  const double y_clamped = std::clamp(p.y(), -kRailHalf, kRailHalf);
  if (y_clamped != p.y()) pen_reach = config_.collision_penalty;
  p.y() = y_clamped;
  const double x_clamped = std::clamp(p.x(), kArmXLo, kArmXHi);
  if (x_clamped != p.x()) pen_reach = config_.collision_penalty;
  p.x() = x_clamped;
  if (p.z() < 0.0) {
    p.z() = 0.0;
    pen_table = config_.collision_penalty;
  }
  // disc limit in the x-z plane: give up height first
  if (p.x() * p.x() + p.z() * p.z() > kDiscRadius * kDiscRadius) {
    p.z() = std::sqrt(std::max(kDiscRadius * kDiscRadius - p.x() * p.x(), 0.0));
    pen_reach = config_.collision_penalty;
  }
  eef_pos_ = p;

  tilt_.x() = std::clamp(tilt_.x() + config_.gain_rotate * a[3], -kTiltLimit, kTiltLimit);
  tilt_.y() = std::clamp(tilt_.y() + config_.gain_rotate * a[4], -kTiltLimit, kTiltLimit);
  tilt_.z() = std::clamp(tilt_.z() + config_.gain_rotate * a[5], -kTiltLimit, kTiltLimit);

  ++steps_;

  Vec reward = Vec::Zero(task_spec_.reward_count());
  reward[0] = progress_reward(dx, std::abs(eef_pos_.y() - box_pos_.y()), config_.lambda);
  reward[1] = progress_reward(dy, std::abs(eef_pos_.x() - box_pos_.x()), config_.lambda);
  reward[2] = progress_reward(dz1, std::abs(eef_pos_.z() - hover_z()), config_.lambda);
  reward[3] = progress_reward(dori, std::hypot(tilt_.x(), tilt_.y()), config_.lambda);
  reward[4] = progress_reward(dz2, std::abs(eef_pos_.z() - box_pos_.z()), config_.lambda);
  reward[9] = pen_reach;
  reward[10] = pen_table;

  // gripper: a successful close requires starting the step in stage 4
  if (a[6] > 0.5) {
    if (tr.stage == 4) {
      reward[8] = config_.grasp_bonus;
      gripper_closed_ = true;
      tr.terminal = true;
    } else {
      reward[4 + tr.stage] = config_.premature_close_penalty;  // r_gripper_s<i>
    }
  }

  tr.next_state = observation();
  tr.next_stage = stage_of(tr.next_state);
  if (tr.next_stage > tr.stage) reward[11] = config_.stage_bonus;

  tr.reward = reward;
  return tr;
}

CausalMatrix GraspKinematicEnv::ground_truth_matrix(int stage) const {
  if (stage < 1 || stage > 4) throw std::invalid_argument("stage out of range");
  CausalMatrix m;
  m.stage = stage;
  m.action_names = task_spec_.action_names;
  for (int idx : task_spec_.stage_rewards[stage - 1])
    m.reward_names.push_back(task_spec_.reward_names[idx]);
  m.entries = Eigen::MatrixXi::Zero(7, static_cast<int>(m.reward_names.size()));
  switch (stage) {
    case 1:
      // columns: r_eefx, r_eefy, r_eefz1, r_gripper_s1
      m.entries(0, 1) = 1;  // armx -> r_eefy (frame rotation)
      m.entries(0, 2) = 1;  // armx -> r_eefz1 (disc limit lowers the height)
      m.entries(1, 0) = 1;  // army -> r_eefx
      m.entries(2, 2) = 1;  // armz -> r_eefz1
      m.entries(6, 3) = 1;  // grip -> r_gripper_s1
      break;
    case 2:
      // columns: r_ori, r_gripper_s2; armrz (yaw) does not affect r_ori
      m.entries(3, 0) = 1;  // armrx
      m.entries(4, 0) = 1;  // armry
      m.entries(6, 1) = 1;  // grip
      break;
    case 3:
      // columns: r_eefz2, r_gripper_s3; within the stage's horizontal window
      // the disc limit never binds, so only armz moves the height
      m.entries(2, 0) = 1;  // armz
      m.entries(6, 1) = 1;  // grip
      break;
    case 4:
      m.entries(6, 0) = 1;  // grip -> r_gripper
      break;
  }
  m.validate();
  return m;
}

std::unique_ptr<Env> GraspKinematicEnv::clone_with_seed(uint64_t seed) const {
  EnvConfig cfg = config_;
  cfg.seed = seed;
  return std::make_unique<GraspKinematicEnv>(cfg);
}

}  // namespace scrl
