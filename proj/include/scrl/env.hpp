#pragma once

#include <memory>
#include <string>

#include "scrl/causal_matrix.hpp"
#include "scrl/mdp.hpp"

namespace scrl {

// Shared knobs for both kinematic tasks. Values not applicable to a task are
// ignored by it.
struct EnvConfig {
  std::string preset = "coupled";  // mobile_reach_2d: {coupled, decoupled}

  // per-step action gains
  double gain_forward = 0.1;    // m
  double gain_turn = 0.15;      // rad
  double gain_arm = 0.05;       // m (mobile arm translate)
  double gain_translate = 0.04; // m (grasp arm translate)
  double gain_rotate = 0.1;     // rad (grasp wrist)

  double lambda = 10.0;  // progress reward scale

  // stage thresholds
  double rho_near = 0.6;         // m
  double theta_face = 0.2;       // rad
  double horizontal_tol = 0.03;  // m
  double orientation_tol = 0.1;  // rad
  double lower_tol = 0.02;       // m
  double success_tol = 0.05;     // m

  // fixed bonuses and penalties
  double stage_bonus = 5.0;
  double grasp_bonus = 1.0;
  double premature_close_penalty = -0.5;
  double collision_penalty = -1.0;

  int max_steps = 500;
  uint64_t seed = 0;

  void validate() const;
};

// Single-threaded kinematic task environment. One instance per worker;
// instances share nothing.
class Env {
 public:
  virtual ~Env() = default;

  virtual std::string name() const = 0;
  virtual const EnvConfig& config() const = 0;
  virtual const StagedTaskSpec& task_spec() const = 0;
  virtual int observation_dim() const = 0;

  // Generic (stage 1) reset from the env's own rng stream.
  virtual Vec reset() = 0;

  // Reset into a stage-specific initial distribution, stage in [1, N].
  virtual Vec reset_to_stage(int stage) = 0;

  virtual Transition step(const Vec& action) = 0;

  // U(s): deterministic stage dispatch from an observation.
  virtual int stage_of(const Vec& observation) const = 0;

  // Analytically known causal matrix of the current preset.
  virtual CausalMatrix ground_truth_matrix(int stage) const = 0;

  // Steps taken since the last reset; truncation is reached at max_steps.
  virtual int episode_steps() const = 0;
  bool truncated() const { return episode_steps() >= config().max_steps; }

  virtual std::unique_ptr<Env> clone_with_seed(uint64_t seed) const = 0;
};

// Env selection by name: "mobile_reach_2d" or "grasp_kinematic".
std::unique_ptr<Env> make_env(const std::string& name, const EnvConfig& config);

}  // namespace scrl
