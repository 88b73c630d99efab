#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

namespace scrl {

using Vec = Eigen::VectorXd;

// Names and stage grouping of the action and reward vectors of one task.
// Stages are 1-based. Reward indices listed in penalty_rewards are excluded
// from causal discovery and appended to every stage's reward slice.
struct StagedTaskSpec {
  int n_stages = 0;
  std::vector<std::string> action_names;
  std::vector<std::string> reward_names;
  std::vector<std::vector<int>> stage_rewards;  // [stage-1] -> reward indices
  std::vector<int> penalty_rewards;

  int action_count() const { return static_cast<int>(action_names.size()); }
  int reward_count() const { return static_cast<int>(reward_names.size()); }

  // Throws std::invalid_argument when the stage groups are not disjoint,
  // a group is empty, a non-penalty reward is unassigned, or a penalty index
  // also appears in a stage group.
  void validate() const;
};

struct Transition {
  Vec state;
  Vec action;
  Vec reward;  // full M-dimensional reward vector
  Vec next_state;
  int stage = 1;
  int next_stage = 1;
  bool terminal = false;
};

enum class SubtaskExit { kAdvanced, kRegressed, kTerminal, kTruncated };

// Maximal contiguous run of transitions spent in one stage.
struct SubtaskEpisode {
  int stage = 1;
  std::vector<Transition> transitions;
  SubtaskExit exit = SubtaskExit::kTruncated;
};

// Clamps every component to [-1, 1]; throws on non-finite input.
Vec clamp_action(const Vec& action);

// lambda * (prev_dist - cur_dist); positive when approaching the target.
double progress_reward(double prev_dist, double cur_dist, double lambda);

// Partitions one env episode at every stage change. Concatenating the
// segments reproduces the input.
std::vector<SubtaskEpisode> segment_episode(
    const std::vector<Transition>& trajectory);

// Indices selected by slice_reward: stage group then penalties, in spec order.
std::vector<int> sliced_reward_indices(const StagedTaskSpec& spec, int stage);

Vec slice_reward(const Vec& reward, const StagedTaskSpec& spec, int stage);

std::vector<std::string> sliced_reward_names(const StagedTaskSpec& spec,
                                             int stage);

// JSON-lines trajectory dump, one transition per line with keys
// state, action, reward, stage, next_stage, terminal.
void write_trajectory_jsonl(std::ostream& os,
                            const std::vector<Transition>& trajectory);
std::vector<Transition> read_trajectory_jsonl(std::istream& is);

}  // namespace scrl
