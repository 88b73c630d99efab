#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace scrl {

// Binary actions-by-reward-terms adjacency matrix for one stage.
// Rows follow the global action order, columns the stage's reward terms.
struct CausalMatrix {
  int stage = 1;
  std::vector<std::string> action_names;
  std::vector<std::string> reward_names;
  Eigen::MatrixXi entries;  // K x J, entries in {0, 1}

  int rows() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }

  // Throws std::invalid_argument on shape mismatch or non-binary entries.
  void validate() const;

  // Column indices with no causal action; a violation of the standing
  // assumption that every reward term has at least one cause.
  std::vector<int> empty_columns() const;

  bool operator==(const CausalMatrix& other) const {
    return stage == other.stage && action_names == other.action_names &&
           reward_names == other.reward_names && entries == other.entries;
  }
};

inline void CausalMatrix::validate() const {
  if (entries.rows() != static_cast<Eigen::Index>(action_names.size()) ||
      entries.cols() != static_cast<Eigen::Index>(reward_names.size()))
    throw std::invalid_argument("causal matrix shape does not match names");
  for (int k = 0; k < entries.rows(); ++k)
    for (int j = 0; j < entries.cols(); ++j)
      if (entries(k, j) != 0 && entries(k, j) != 1)
        throw std::invalid_argument("causal matrix entries must be binary");
}

inline std::vector<int> CausalMatrix::empty_columns() const {
  std::vector<int> cols;
  for (int j = 0; j < entries.cols(); ++j)
    if (entries.col(j).sum() == 0) cols.push_back(j);
  return cols;
}

}  // namespace scrl
