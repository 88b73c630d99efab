#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

namespace scrl {

enum class Activation { kTanh, kRelu };

struct HeadSpec {
  std::string name;
  int dim = 1;
  bool clamp_log_std = false;  // clamp outputs to [kLogStdMin, kLogStdMax]
};

struct NetworkSpec {
  int input_dim = 1;
  std::vector<int> hidden;
  Activation activation = Activation::kTanh;
  std::vector<HeadSpec> heads;

  void validate() const;
};

inline constexpr double kLogStdMin = -10.0;
inline constexpr double kLogStdMax = 2.0;

struct GaussianPrediction {
  double mean = 0.0;
  double log_std = 0.0;
  double sigma() const { return std::exp(log_std); }
};

// 0.5 log(2 pi sigma^2) + (target - mean)^2 / (2 sigma^2)
double gaussian_nll(const GaussianPrediction& pred, double target);

// Multilayer perceptron with named output heads, manual backprop, and all
// parameters in one flat vector (hidden layers orthogonal-initialized, head
// weights and all biases zero). Forward is const and safe to call from many
// threads; training mutates through the optimizer only.
class Mlp {
 public:
  Mlp(NetworkSpec spec, uint64_t seed);

  const NetworkSpec& spec() const { return spec_; }
  int parameter_count() const { return static_cast<int>(params_.size()); }
  Eigen::VectorXd& parameters() { return params_; }
  const Eigen::VectorXd& parameters() const { return params_; }

  // Activations cached by the training forward pass.
  struct Tape {
    Eigen::MatrixXd input;
    std::vector<Eigen::MatrixXd> hidden;    // post-activation per layer
    std::vector<Eigen::MatrixXd> head_raw;  // pre-clamp head outputs
  };

  // X is batch x input_dim; returns one batch x dim matrix per head.
  std::vector<Eigen::MatrixXd> forward(const Eigen::MatrixXd& X) const;
  std::vector<Eigen::MatrixXd> forward(const Eigen::MatrixXd& X, Tape* tape) const;

  // Accumulates parameter gradients of sum_i L_i given dL/d(head outputs).
  // grad must have parameter_count entries and be zeroed by the caller when a
  // fresh gradient is wanted. input_grad, when given, receives dL/dX.
  void backward(const Tape& tape, const std::vector<Eigen::MatrixXd>& head_grads,
                Eigen::VectorXd* grad, Eigen::MatrixXd* input_grad = nullptr) const;

  // Single-prediction convenience for nets with heads [mean, log_std].
  GaussianPrediction predict_gaussian(const Eigen::VectorXd& input) const;

 private:
  friend class NetworkCheckpointAccess;
  int layer_count() const { return static_cast<int>(spec_.hidden.size()); }
  // parameter block offsets
  struct Block { int offset; int rows; int cols; };
  Block weight_block(int layer) const;
  Block bias_block(int layer) const;
  Block head_weight_block(int head) const;
  Block head_bias_block(int head) const;

  NetworkSpec spec_;
  Eigen::VectorXd params_;
  std::vector<int> dims_;  // input + hidden widths
};

// Adaptive-moment optimizer over a flat parameter vector.
struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam(int parameter_count, const AdamConfig& config);
  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);
  int steps_taken() const { return steps_; }
  const AdamConfig& config() const { return config_; }
  void set_lr(double lr) { config_.lr = lr; }

 private:
  AdamConfig config_;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
  int steps_ = 0;
};

// Loss evaluated on head outputs; grads are dL/d(head outputs), one matrix
// per head, already scaled for the batch reduction in use.
struct LossEval {
  double loss = 0.0;
  std::vector<Eigen::MatrixXd> head_grads;
};
using LossFn = std::function<LossEval(const std::vector<Eigen::MatrixXd>&)>;

// One optimizer step on the batch loss; returns the pre-update loss.
// Throws std::runtime_error when the loss is not finite.
double backward_update(Mlp& net, Adam& optimizer, const Eigen::MatrixXd& X,
                       const LossFn& loss);

// Central-difference check of the analytic gradient (h = 1e-5); returns the
// max relative error over all parameters.
double gradient_check(Mlp& net, const Eigen::MatrixXd& X, const LossFn& loss,
                      double fd_step = 1e-5);

void save_network(const Mlp& net, const std::string& path);
Mlp load_network(const std::string& path);

}  // namespace scrl
