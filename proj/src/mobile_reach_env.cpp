#include "scrl/mobile_reach_env.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scrl {

namespace {

constexpr double kArenaLo = 0.0;
constexpr double kArenaHi = 10.0;
// arm reach box, base frame
constexpr double kBoxXLo = 0.1, kBoxXHi = 0.8;
constexpr double kBoxYLo = -0.4, kBoxYHi = 0.4;
constexpr double kBoxZLo = 0.3, kBoxZHi = 1.2;

double wrap_angle(double a) {
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

}  // namespace

void EnvConfig::validate() const {
  if (gain_forward <= 0 || gain_turn <= 0 || gain_arm <= 0 ||
      gain_translate <= 0 || gain_rotate <= 0)
    throw std::invalid_argument("gains must be positive");
  if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
  if (rho_near <= 0 || theta_face <= 0 || horizontal_tol <= 0 ||
      orientation_tol <= 0 || lower_tol <= 0 || success_tol <= 0)
    throw std::invalid_argument("thresholds must be positive");
  if (max_steps <= 0) throw std::invalid_argument("max_steps must be positive");
  if (preset != "coupled" && preset != "decoupled")
    throw std::invalid_argument("preset must be coupled or decoupled");
}

MobileReachEnv::MobileReachEnv(const EnvConfig& config)
    : config_(config), rng_(Rng::derive(config.seed, "mobile_reach_2d")) {
  config_.validate();
  task_spec_.n_stages = 3;
  task_spec_.action_names = {"forward", "turn", "armx", "army", "armz"};
  task_spec_.reward_names = {"r_rho",  "r_theta",  "r_eefx",
                             "r_eefy", "r_eefz",   "pen_base",
                             "pen_arm", "r_stage_bonus"};
  task_spec_.stage_rewards = {{0}, {1}, {2, 3, 4}};
  task_spec_.penalty_rewards = {5, 6, 7};
  task_spec_.validate();
}

Eigen::Vector3d MobileReachEnv::eef_world() const {
  const double c = std::cos(heading_), s = std::sin(heading_);
  return {base_xy_.x() + c * eef_offset_.x() - s * eef_offset_.y(),
          base_xy_.y() + s * eef_offset_.x() + c * eef_offset_.y(),
          eef_offset_.z()};
}

double MobileReachEnv::rho() const {
  return (target_.head<2>() - base_xy_).norm();
}

double MobileReachEnv::bearing() const {
  const Eigen::Vector2d rel = target_.head<2>() - base_xy_;
  return wrap_angle(std::atan2(rel.y(), rel.x()) - heading_);
}

Vec MobileReachEnv::observation() const {
  Vec obs(10);
  obs << rho(), bearing(), target_.z(), last_speeds_.x(), last_speeds_.y(),
      eef_offset_.x(), eef_offset_.y(), eef_offset_.z(), std::cos(heading_),
      std::sin(heading_);
  return obs;
}

int MobileReachEnv::stage_of(const Vec& observation) const {
  if (observation.size() != observation_dim())
    throw std::invalid_argument("observation has wrong dimension");
  if (observation[0] > config_.rho_near) return 1;
  if (std::abs(observation[1]) > config_.theta_face) return 2;
  return 3;
}

Vec MobileReachEnv::reset() {
  reset_to_stage(1);
  return observation();
}

void MobileReachEnv::place_for_stage(int stage) {
  base_xy_ = {5.0 + rng_.uniform(-1.0, 1.0), 5.0 + rng_.uniform(-1.0, 1.0)};
  heading_ = rng_.uniform(-std::numbers::pi, std::numbers::pi);
  eef_offset_ = {rng_.uniform(kBoxXLo, kBoxXHi), rng_.uniform(kBoxYLo, kBoxYHi),
                 rng_.uniform(kBoxZLo, kBoxZHi)};
  const double target_z = rng_.uniform(0.5, 1.0);

  double dist = 0.0;
  double world_bearing = 0.0;
  switch (stage) {
    case 1:
      dist = rng_.uniform(1.5, 4.0);
      world_bearing = rng_.uniform(-std::numbers::pi, std::numbers::pi);
      break;
    case 2: {
      dist = rng_.uniform(0.2, 0.9 * config_.rho_near);
      const double theta =
          rng_.uniform(1.2 * config_.theta_face, std::numbers::pi) *
          (rng_.uniform() < 0.5 ? -1.0 : 1.0);
      world_bearing = wrap_angle(heading_ + theta);
      break;
    }
    case 3: {
      dist = rng_.uniform(0.2, 0.9 * config_.rho_near);
      const double theta = rng_.uniform(-0.9, 0.9) * config_.theta_face;
      world_bearing = wrap_angle(heading_ + theta);
      break;
    }
    default:
      throw std::invalid_argument("stage out of range");
  }
  target_ = {base_xy_.x() + dist * std::cos(world_bearing),
             base_xy_.y() + dist * std::sin(world_bearing), target_z};
  // keep the target inside the arena; the base spawn leaves enough margin
  target_.x() = std::clamp(target_.x(), kArenaLo + 0.2, kArenaHi - 0.2);
  target_.y() = std::clamp(target_.y(), kArenaLo + 0.2, kArenaHi - 0.2);
}

Vec MobileReachEnv::reset_to_stage(int stage) {
  if (stage < 1 || stage > 3)
    throw std::invalid_argument("mobile_reach_2d has stages 1..3");
  for (int attempt = 0; attempt < 64; ++attempt) {
    place_for_stage(stage);
    if (stage == 3 && (eef_world() - target_).norm() < 2.0 * config_.success_tol)
      continue;  // avoid spawning already solved
    last_speeds_.setZero();
    steps_ = 0;
    Vec obs = observation();
    if (stage_of(obs) == stage) return obs;
  }
  throw std::runtime_error("could not reach requested stage distribution");
}

Transition MobileReachEnv::step(const Vec& action) {
  if (action.size() != 5)
    throw std::invalid_argument("mobile_reach_2d expects 5 action dimensions");
  const Vec a = clamp_action(action);

  Transition tr;
  tr.state = observation();
  tr.action = a;
  tr.stage = stage_of(tr.state);

  const bool decoupled = config_.preset == "decoupled";
  const bool frozen_base = decoupled && tr.stage == 3;
  const double gf = frozen_base ? 0.0 : config_.gain_forward;
  const double gt = frozen_base ? 0.0 : config_.gain_turn;

  // distances before
  const Eigen::Vector3d eef_before = eef_world();
  const double d_rho = rho();
  const double d_theta = std::abs(bearing());
  const Eigen::Vector3d d_eef = (eef_before - target_).cwiseAbs();

  double pen_base = 0.0, pen_arm = 0.0;

  // coupled preset applies the turn before translating, so the turn command
  // redirects this step's base motion
  const double new_heading = wrap_angle(heading_ + gt * a[1]);
  const double move_heading = decoupled ? heading_ : new_heading;
  heading_ = new_heading;
  Eigen::Vector2d base_req =
      base_xy_ + gf * a[0] * Eigen::Vector2d{std::cos(move_heading),
                                             std::sin(move_heading)};
  Eigen::Vector2d base_clamped{std::clamp(base_req.x(), kArenaLo, kArenaHi),
                               std::clamp(base_req.y(), kArenaLo, kArenaHi)};
  if ((base_clamped - base_req).norm() > 0.0) pen_base = config_.collision_penalty;
  base_xy_ = base_clamped;

  Eigen::Vector3d eef_req = eef_offset_ + config_.gain_arm *
                                              Eigen::Vector3d{a[2], a[3], a[4]};
  Eigen::Vector3d eef_clamped{std::clamp(eef_req.x(), kBoxXLo, kBoxXHi),
                              std::clamp(eef_req.y(), kBoxYLo, kBoxYHi),
                              std::clamp(eef_req.z(), kBoxZLo, kBoxZHi)};
  if ((eef_clamped - eef_req).norm() > 0.0) pen_arm = config_.collision_penalty;
  eef_offset_ = eef_clamped;

  last_speeds_ = {gf * a[0], gt * a[1]};
  ++steps_;

  // distances after
  const Eigen::Vector3d eef_after = eef_world();
  const Eigen::Vector3d d_eef_after = (eef_after - target_).cwiseAbs();

  Vec reward = Vec::Zero(task_spec_.reward_count());
  reward[0] = progress_reward(d_rho, rho(), config_.lambda);
  reward[1] = progress_reward(d_theta, std::abs(bearing()), config_.lambda);
  for (int i = 0; i < 3; ++i)
    reward[2 + i] = progress_reward(d_eef[i], d_eef_after[i], config_.lambda);
  reward[5] = pen_base;
  reward[6] = pen_arm;

  tr.next_state = observation();
  tr.next_stage = stage_of(tr.next_state);
  if (tr.next_stage > tr.stage) reward[7] = config_.stage_bonus;
  if (tr.next_stage == 3 &&
      (eef_after - target_).norm() < config_.success_tol)
    tr.terminal = true;

  tr.reward = reward;
  return tr;
}

CausalMatrix MobileReachEnv::ground_truth_matrix(int stage) const {
  if (stage < 1 || stage > 3) throw std::invalid_argument("stage out of range");
  CausalMatrix m;
  m.stage = stage;
  m.action_names = task_spec_.action_names;
  for (int idx : task_spec_.stage_rewards[stage - 1])
    m.reward_names.push_back(task_spec_.reward_names[idx]);
  m.entries = Eigen::MatrixXi::Zero(5, static_cast<int>(m.reward_names.size()));
  const bool coupled = config_.preset == "coupled";
  switch (stage) {
    case 1:
      m.entries(0, 0) = 1;                 // forward -> r_rho
      if (coupled) m.entries(1, 0) = 1;    // turn redirects the translation
      break;
    case 2:
      m.entries(0, 0) = 1;  // forward -> r_theta (parallax at close range)
      m.entries(1, 0) = 1;  // turn -> r_theta
      break;
    case 3:
      if (coupled) {
        m.entries(0, 0) = m.entries(0, 1) = 1;  // forward -> r_eefx, r_eefy
        m.entries(1, 0) = m.entries(1, 1) = 1;  // turn    -> r_eefx, r_eefy
      }
      m.entries(2, 0) = m.entries(2, 1) = 1;  // armx -> r_eefx, r_eefy
      m.entries(3, 0) = m.entries(3, 1) = 1;  // army -> r_eefx, r_eefy
      m.entries(4, 2) = 1;                    // armz -> r_eefz
      break;
  }
  m.validate();
  return m;
}

std::unique_ptr<Env> MobileReachEnv::clone_with_seed(uint64_t seed) const {
  EnvConfig cfg = config_;
  cfg.seed = seed;
  return std::make_unique<MobileReachEnv>(cfg);
}

}  // namespace scrl
