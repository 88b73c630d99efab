#include "scrl/nn.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "json.hpp"
#include "scrl/rng.hpp"

namespace scrl {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using MapM = Eigen::Map<MatrixXd>;
using CMapM = Eigen::Map<const MatrixXd>;
using MapV = Eigen::Map<VectorXd>;
using CMapV = Eigen::Map<const VectorXd>;

// tanh through the vectorized exp kernel; algebraically identical
inline void tanh_inplace(MatrixXd& m) {
  m.array() = 1.0 - 2.0 / ((2.0 * m.array()).exp() + 1.0);
}

inline void activate(MatrixXd& m, Activation act) {
  if (act == Activation::kTanh)
    tanh_inplace(m);
  else
    m = m.cwiseMax(0.0);
}

// derivative expressed through the post-activation value
inline void activation_backward(MatrixXd& grad, const MatrixXd& post, Activation act) {
  if (act == Activation::kTanh)
    grad.array() *= 1.0 - post.array().square();
  else
    grad.array() *= (post.array() > 0.0).cast<double>();
}

MatrixXd orthogonal_matrix(int rows, int cols, Rng& rng) {
  const int big = std::max(rows, cols);
  MatrixXd g(big, big);
  for (int i = 0; i < big; ++i)
    for (int j = 0; j < big; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(big, big);
  return q.topLeftCorner(rows, cols);
}

}  // namespace

void NetworkSpec::validate() const {
  if (input_dim < 1) throw std::invalid_argument("input_dim must be >= 1");
  for (int h : hidden)
    if (h < 1) throw std::invalid_argument("hidden widths must be >= 1");
  if (heads.empty()) throw std::invalid_argument("at least one head required");
  for (const auto& h : heads)
    if (h.dim < 1) throw std::invalid_argument("head dims must be >= 1");
}

double gaussian_nll(const GaussianPrediction& pred, double target) {
  const double s = pred.log_std;
  const double diff = target - pred.mean;
  return 0.5 * std::log(2.0 * std::numbers::pi) + s +
         0.5 * diff * diff * std::exp(-2.0 * s);
}

Mlp::Mlp(NetworkSpec spec, uint64_t seed) : spec_(std::move(spec)) {
  spec_.validate();
  dims_.push_back(spec_.input_dim);
  for (int h : spec_.hidden) dims_.push_back(h);

  int total = 0;
  for (int l = 0; l < layer_count(); ++l) total += dims_[l] * dims_[l + 1] + dims_[l + 1];
  const int last = dims_.back();
  for (const auto& h : spec_.heads) total += last * h.dim + h.dim;
  params_ = VectorXd::Zero(total);

  Rng rng(Rng::derive(seed, "mlp-init"));
  const double gain = spec_.activation == Activation::kRelu ? std::numbers::sqrt2 : 1.0;
  for (int l = 0; l < layer_count(); ++l) {
    const Block b = weight_block(l);
    MapM w(params_.data() + b.offset, b.rows, b.cols);
    w = gain * orthogonal_matrix(b.rows, b.cols, rng);
  }
  // head weights and all biases stay zero
}

Mlp::Block Mlp::weight_block(int layer) const {
  int off = 0;
  for (int l = 0; l < layer; ++l) off += dims_[l] * dims_[l + 1] + dims_[l + 1];
  return {off, dims_[layer], dims_[layer + 1]};
}

Mlp::Block Mlp::bias_block(int layer) const {
  const Block w = weight_block(layer);
  return {w.offset + w.rows * w.cols, w.cols, 1};
}

Mlp::Block Mlp::head_weight_block(int head) const {
  int off = 0;
  for (int l = 0; l < layer_count(); ++l) off += dims_[l] * dims_[l + 1] + dims_[l + 1];
  const int last = dims_.back();
  for (int h = 0; h < head; ++h) off += last * spec_.heads[h].dim + spec_.heads[h].dim;
  return {off, last, spec_.heads[head].dim};
}

Mlp::Block Mlp::head_bias_block(int head) const {
  const Block w = head_weight_block(head);
  return {w.offset + w.rows * w.cols, w.cols, 1};
}

std::vector<MatrixXd> Mlp::forward(const MatrixXd& X) const {
  Tape tape;
  return forward(X, &tape);
}

std::vector<MatrixXd> Mlp::forward(const MatrixXd& X, Tape* tape) const {
  if (X.cols() != spec_.input_dim)
    throw std::invalid_argument("input has wrong dimension");
  tape->input = X;
  tape->hidden.resize(layer_count());
  const MatrixXd* prev = &tape->input;
  for (int l = 0; l < layer_count(); ++l) {
    const Block wb = weight_block(l), bb = bias_block(l);
    CMapM w(params_.data() + wb.offset, wb.rows, wb.cols);
    CMapV b(params_.data() + bb.offset, bb.rows);
    MatrixXd& h = tape->hidden[l];
    h.noalias() = (*prev) * w;
    h.rowwise() += b.transpose();
    activate(h, spec_.activation);
    prev = &h;
  }
  tape->head_raw.resize(spec_.heads.size());
  std::vector<MatrixXd> outs(spec_.heads.size());
  for (size_t i = 0; i < spec_.heads.size(); ++i) {
    const Block wb = head_weight_block(static_cast<int>(i));
    const Block bb = head_bias_block(static_cast<int>(i));
    CMapM w(params_.data() + wb.offset, wb.rows, wb.cols);
    CMapV b(params_.data() + bb.offset, bb.rows);
    MatrixXd& raw = tape->head_raw[i];
    raw.noalias() = (*prev) * w;
    raw.rowwise() += b.transpose();
    outs[i] = spec_.heads[i].clamp_log_std
                  ? raw.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax)
                  : raw;
  }
  return outs;
}

void Mlp::backward(const Tape& tape, const std::vector<MatrixXd>& head_grads,
                   VectorXd* grad, MatrixXd* input_grad) const {
  if (head_grads.size() != spec_.heads.size())
    throw std::invalid_argument("one gradient per head required");
  if (grad && grad->size() != params_.size())
    throw std::invalid_argument("gradient buffer has wrong size");

  const MatrixXd& last = layer_count() > 0 ? tape.hidden.back() : tape.input;
  MatrixXd d_last = MatrixXd::Zero(last.rows(), last.cols());
  for (size_t i = 0; i < spec_.heads.size(); ++i) {
    MatrixXd g = head_grads[i];
    if (spec_.heads[i].clamp_log_std) {
      const auto& raw = tape.head_raw[i];
      g.array() *= ((raw.array() > kLogStdMin) && (raw.array() < kLogStdMax))
                       .cast<double>();
    }
    const Block wb = head_weight_block(static_cast<int>(i));
    const Block bb = head_bias_block(static_cast<int>(i));
    CMapM w(params_.data() + wb.offset, wb.rows, wb.cols);
    if (grad) {
      MapM dw(grad->data() + wb.offset, wb.rows, wb.cols);
      MapV db(grad->data() + bb.offset, bb.rows);
      dw.noalias() += last.transpose() * g;
      db.noalias() += g.colwise().sum().transpose();
    }
    d_last.noalias() += g * w.transpose();
  }

  MatrixXd d_cur = std::move(d_last);
  for (int l = layer_count() - 1; l >= 0; --l) {
    activation_backward(d_cur, tape.hidden[l], spec_.activation);
    const MatrixXd& below = l == 0 ? tape.input : tape.hidden[l - 1];
    const Block wb = weight_block(l), bb = bias_block(l);
    CMapM w(params_.data() + wb.offset, wb.rows, wb.cols);
    if (grad) {
      MapM dw(grad->data() + wb.offset, wb.rows, wb.cols);
      MapV db(grad->data() + bb.offset, bb.rows);
      dw.noalias() += below.transpose() * d_cur;
      db.noalias() += d_cur.colwise().sum().transpose();
    }
    if (l > 0 || input_grad) {
      MatrixXd d_below;
      d_below.noalias() = d_cur * w.transpose();
      d_cur = std::move(d_below);
    }
  }
  if (input_grad) {
    if (layer_count() == 0)
      *input_grad = d_cur;  // heads read the input directly
    else
      *input_grad = d_cur;
  }
}

GaussianPrediction Mlp::predict_gaussian(const VectorXd& input) const {
  const auto outs = forward(input.transpose());
  if (outs.size() < 2 || outs[0].cols() != 1 || outs[1].cols() != 1)
    throw std::logic_error("predict_gaussian expects scalar mean/log_std heads");
  return {outs[0](0, 0), outs[1](0, 0)};
}

Adam::Adam(int parameter_count, const AdamConfig& config)
    : config_(config),
      m_(VectorXd::Zero(parameter_count)),
      v_(VectorXd::Zero(parameter_count)) {}

void Adam::step(VectorXd& params, const VectorXd& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    throw std::invalid_argument("optimizer/parameter size mismatch");
  ++steps_;
  m_ = config_.beta1 * m_ + (1.0 - config_.beta1) * grad;
  v_ = config_.beta2 * v_ + (1.0 - config_.beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(config_.beta1, steps_);
  const double c2 = 1.0 - std::pow(config_.beta2, steps_);
  params.array() -= config_.lr * (m_.array() / c1) /
                    ((v_.array() / c2).sqrt() + config_.eps);
}

double backward_update(Mlp& net, Adam& optimizer, const MatrixXd& X,
                       const LossFn& loss) {
  if (X.rows() == 0) throw std::invalid_argument("batch must be non-empty");
  Mlp::Tape tape;
  const auto outs = net.forward(X, &tape);
  LossEval eval = loss(outs);
  if (!std::isfinite(eval.loss))
    throw std::runtime_error("non-finite loss in backward_update (batch of " +
                             std::to_string(X.rows()) + ")");
  VectorXd grad = VectorXd::Zero(net.parameter_count());
  net.backward(tape, eval.head_grads, &grad);
  optimizer.step(net.parameters(), grad);
  return eval.loss;
}

double gradient_check(Mlp& net, const MatrixXd& X, const LossFn& loss,
                      double fd_step) {
  Mlp::Tape tape;
  const auto outs = net.forward(X, &tape);
  LossEval eval = loss(outs);
  VectorXd analytic = VectorXd::Zero(net.parameter_count());
  net.backward(tape, eval.head_grads, &analytic);

  double max_rel = 0.0;
  VectorXd& p = net.parameters();
  for (int i = 0; i < p.size(); ++i) {
    const double saved = p[i];
    p[i] = saved + fd_step;
    const double up = loss(net.forward(X)).loss;
    p[i] = saved - fd_step;
    const double down = loss(net.forward(X)).loss;
    p[i] = saved;
    const double fd = (up - down) / (2.0 * fd_step);
    const double a = analytic[i];
    if (std::abs(fd) < 1e-9 && std::abs(a) < 1e-9) continue;
    max_rel = std::max(max_rel, std::abs(a - fd) /
                                    std::max({std::abs(a), std::abs(fd), 1e-6}));
  }
  return max_rel;
}

namespace {

nlohmann::ordered_json spec_to_json(const NetworkSpec& spec) {
  nlohmann::ordered_json j;
  j["format"] = "scrl-net-1";
  j["input_dim"] = spec.input_dim;
  j["hidden"] = spec.hidden;
  j["activation"] = spec.activation == Activation::kTanh ? "tanh" : "relu";
  auto heads = nlohmann::ordered_json::array();
  for (const auto& h : spec.heads)
    heads.push_back({{"name", h.name}, {"dim", h.dim}, {"clamp_log_std", h.clamp_log_std}});
  j["heads"] = heads;
  return j;
}

NetworkSpec spec_from_json(const nlohmann::json& j) {
  NetworkSpec spec;
  spec.input_dim = j.at("input_dim").get<int>();
  spec.hidden = j.at("hidden").get<std::vector<int>>();
  spec.activation = j.at("activation").get<std::string>() == "relu"
                        ? Activation::kRelu
                        : Activation::kTanh;
  for (const auto& h : j.at("heads"))
    spec.heads.push_back({h.at("name").get<std::string>(), h.at("dim").get<int>(),
                          h.at("clamp_log_std").get<bool>()});
  return spec;
}

}  // namespace

void save_network(const Mlp& net, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  auto header = spec_to_json(net.spec());
  header["parameter_count"] = net.parameter_count();
  os << header.dump() << '\n';
  os.write(reinterpret_cast<const char*>(net.parameters().data()),
           static_cast<std::streamsize>(net.parameter_count() * sizeof(double)));
}

Mlp load_network(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::string header_line;
  std::getline(is, header_line);
  auto j = nlohmann::json::parse(header_line);
  if (j.at("format") != "scrl-net-1")
    throw std::runtime_error("unrecognized checkpoint format in " + path);
  Mlp net(spec_from_json(j), 0);
  const int expected = j.at("parameter_count").get<int>();
  if (expected != net.parameter_count())
    throw std::runtime_error("checkpoint parameter count does not match spec");
  is.read(reinterpret_cast<char*>(net.parameters().data()),
          static_cast<std::streamsize>(expected * sizeof(double)));
  if (is.gcount() != static_cast<std::streamsize>(expected * sizeof(double)))
    throw std::runtime_error("checkpoint truncated: " + path);
  return net;
}

}  // namespace scrl
