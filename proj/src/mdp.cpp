#include "scrl/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace scrl {

void StagedTaskSpec::validate() const {
  if (n_stages <= 0) throw std::invalid_argument("n_stages must be positive");
  if (static_cast<int>(stage_rewards.size()) != n_stages)
    throw std::invalid_argument("stage_rewards must have one group per stage");
  std::set<int> seen;
  for (const auto& group : stage_rewards) {
    if (group.empty())
      throw std::invalid_argument("stage reward groups must be non-empty");
    for (int idx : group) {
      if (idx < 0 || idx >= reward_count())
        throw std::invalid_argument("stage reward index out of range");
      if (!seen.insert(idx).second)
        throw std::invalid_argument("stage reward groups must be disjoint");
    }
  }
  for (int idx : penalty_rewards) {
    if (idx < 0 || idx >= reward_count())
      throw std::invalid_argument("penalty reward index out of range");
    if (seen.count(idx))
      throw std::invalid_argument("penalty rewards must not appear in stages");
    seen.insert(idx);
  }
  for (int i = 0; i < reward_count(); ++i) {
    if (!seen.count(i))
      throw std::invalid_argument("reward term '" + reward_names[i] +
                                  "' is not assigned to any stage or penalty");
  }
}

Vec clamp_action(const Vec& action) {
  Vec out = action;
  for (int i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i]))
      throw std::invalid_argument("action component is not finite");
    out[i] = std::clamp(out[i], -1.0, 1.0);
  }
  return out;
}

double progress_reward(double prev_dist, double cur_dist, double lambda) {
  if (prev_dist < 0.0 || cur_dist < 0.0)
    throw std::domain_error("distances must be non-negative");
  if (lambda <= 0.0) throw std::domain_error("lambda must be positive");
  return lambda * (prev_dist - cur_dist);
}

std::vector<SubtaskEpisode> segment_episode(
    const std::vector<Transition>& trajectory) {
  std::vector<SubtaskEpisode> segments;
  for (const Transition& t : trajectory) {
    if (segments.empty() || segments.back().stage != t.stage) {
      segments.push_back(SubtaskEpisode{t.stage, {}, SubtaskExit::kTruncated});
    }
    segments.back().transitions.push_back(t);
  }
  for (auto& seg : segments) {
    const Transition& last = seg.transitions.back();
    if (last.next_stage > seg.stage)
      seg.exit = SubtaskExit::kAdvanced;
    else if (last.next_stage < seg.stage)
      seg.exit = SubtaskExit::kRegressed;
    else
      seg.exit = last.terminal ? SubtaskExit::kTerminal : SubtaskExit::kTruncated;
  }
  return segments;
}

std::vector<int> sliced_reward_indices(const StagedTaskSpec& spec, int stage) {
  if (stage < 1 || stage > spec.n_stages)
    throw std::out_of_range("stage out of range");
  std::vector<int> indices = spec.stage_rewards[stage - 1];
  indices.insert(indices.end(), spec.penalty_rewards.begin(),
                 spec.penalty_rewards.end());
  return indices;
}

Vec slice_reward(const Vec& reward, const StagedTaskSpec& spec, int stage) {
  const auto indices = sliced_reward_indices(spec, stage);
  Vec out(indices.size());
  for (size_t i = 0; i < indices.size(); ++i) out[i] = reward[indices[i]];
  return out;
}

std::vector<std::string> sliced_reward_names(const StagedTaskSpec& spec,
                                             int stage) {
  std::vector<std::string> names;
  for (int idx : sliced_reward_indices(spec, stage))
    names.push_back(spec.reward_names[idx]);
  return names;
}

namespace {

nlohmann::ordered_json vec_to_json(const Vec& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vec vec_from_json(const nlohmann::json& arr) {
  Vec v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) v[i] = arr[i].get<double>();
  return v;
}

}  // namespace

void write_trajectory_jsonl(std::ostream& os,
                            const std::vector<Transition>& trajectory) {
  for (const Transition& t : trajectory) {
    nlohmann::ordered_json line;
    line["state"] = vec_to_json(t.state);
    line["action"] = vec_to_json(t.action);
    line["reward"] = vec_to_json(t.reward);
    line["stage"] = t.stage;
    line["next_stage"] = t.next_stage;
    line["terminal"] = t.terminal;
    os << line.dump() << '\n';
  }
}

std::vector<Transition> read_trajectory_jsonl(std::istream& is) {
  std::vector<Transition> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    Transition t;
    t.state = vec_from_json(j.at("state"));
    t.action = vec_from_json(j.at("action"));
    t.reward = vec_from_json(j.at("reward"));
    t.stage = j.at("stage").get<int>();
    t.next_stage = j.at("next_stage").get<int>();
    t.terminal = j.at("terminal").get<bool>();
    if (!out.empty()) out.back().next_state = t.state;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace scrl
