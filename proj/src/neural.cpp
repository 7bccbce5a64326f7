#include "simstore/neural.hpp"

#include <cmath>

#include "simstore/common.hpp"

namespace simstore {

Mlp Mlp::create(int input_dim, int output_dim, int hidden_layers, int hidden_width, Rng& rng) {
  if (input_dim < 1 || output_dim < 1 || hidden_layers < 0 || (hidden_layers > 0 && hidden_width < 1)) {
    throw ContractViolation("Mlp::create: invalid layer sizes");
  }
  std::vector<int> sizes;
  sizes.push_back(input_dim);
  for (int l = 0; l < hidden_layers; ++l) sizes.push_back(hidden_width);
  sizes.push_back(output_dim);

  Mlp net;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    int in = sizes[l];
    int out = sizes[l + 1];
    double bound = 1.0 / std::sqrt(static_cast<double>(in));
    Mat w(out, in);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(-bound, bound);
    }
    Vec b(out);
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = rng.uniform(-bound, bound);
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  return net;
}

Mat mlp_forward(const Mlp& net, const Mat& input, ForwardCache* cache) {
  if (input.rows() != net.input_dim()) {
    throw ContractViolation("mlp_forward: input dimension mismatch");
  }
  if (cache) {
    cache->activations.clear();
    cache->activations.push_back(input);
  }
  Mat x = input;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    Mat z = (net.weights[l] * x).colwise() + net.biases[l];
    if (l + 1 < net.weights.size()) z = z.cwiseMax(0.0);
    x = std::move(z);
    if (cache) cache->activations.push_back(x);
  }
  return x;
}

MlpGrads MlpGrads::zeros_like(const Mlp& net) {
  MlpGrads g;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    g.weights.push_back(Mat::Zero(net.weights[l].rows(), net.weights[l].cols()));
    g.biases.push_back(Vec::Zero(net.biases[l].size()));
  }
  return g;
}

void MlpGrads::set_zero() {
  for (Mat& w : weights) w.setZero();
  for (Vec& b : biases) b.setZero();
}

void mlp_backward(const Mlp& net, const ForwardCache& cache, const Mat& output_grad,
                  MlpGrads& grads) {
  const auto layers = net.weights.size();
  if (cache.activations.size() != layers + 1) {
    throw ContractViolation("mlp_backward: forward cache missing or stale");
  }
  Mat delta = output_grad;
  for (std::size_t l = layers; l-- > 0;) {
    // Hidden activations are rectified: kill gradient where the unit is off.
    if (l + 1 < layers) {
      delta = delta.cwiseProduct(
          (cache.activations[l + 1].array() > 0.0).cast<double>().matrix());
    }
    grads.weights[l] = delta * cache.activations[l].transpose();
    grads.biases[l] = delta.rowwise().sum();
    if (l > 0) delta = net.weights[l].transpose() * delta;
  }
}

AdamState AdamState::create(const Mlp& net, double lr) {
  AdamState s;
  s.lr = lr;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    s.m_w.push_back(Mat::Zero(net.weights[l].rows(), net.weights[l].cols()));
    s.v_w.push_back(Mat::Zero(net.weights[l].rows(), net.weights[l].cols()));
    s.m_b.push_back(Vec::Zero(net.biases[l].size()));
    s.v_b.push_back(Vec::Zero(net.biases[l].size()));
  }
  return s;
}

void adam_step(AdamState& state, Mlp& net, const MlpGrads& grads) {
  state.step += 1;
  double corr1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  double corr2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    state.m_w[l] = state.beta1 * state.m_w[l] + (1.0 - state.beta1) * grads.weights[l];
    state.v_w[l] = state.beta2 * state.v_w[l] +
                   (1.0 - state.beta2) * grads.weights[l].cwiseProduct(grads.weights[l]);
    net.weights[l].array() -=
        state.lr * (state.m_w[l].array() / corr1) / ((state.v_w[l].array() / corr2).sqrt() + state.eps);

    state.m_b[l] = state.beta1 * state.m_b[l] + (1.0 - state.beta1) * grads.biases[l];
    state.v_b[l] = state.beta2 * state.v_b[l] +
                   (1.0 - state.beta2) * grads.biases[l].cwiseProduct(grads.biases[l]);
    net.biases[l].array() -=
        state.lr * (state.m_b[l].array() / corr1) / ((state.v_b[l].array() / corr2).sqrt() + state.eps);
  }
}

Vec softmax(const Vec& x) {
  Vec shifted = x.array() - x.maxCoeff();
  Vec e = shifted.array().exp();
  return e / e.sum();
}

double logsumexp(const Vec& x) {
  double m = x.maxCoeff();
  return m + std::log((x.array() - m).exp().sum());
}

double mse_loss(const Vec& pred, const Vec& target, Vec* grad) {
  if (pred.size() != target.size()) throw ContractViolation("mse_loss: size mismatch");
  Vec diff = pred - target;
  double n = static_cast<double>(pred.size());
  if (grad) *grad = 2.0 * diff / n;
  return diff.squaredNorm() / n;
}

double bce_loss(double prob, int label, double* grad_prob) {
  constexpr double kEps = 1e-7;
  double p = std::clamp(prob, kEps, 1.0 - kEps);
  double loss = label == 1 ? -std::log(p) : -std::log(1.0 - p);
  if (grad_prob) *grad_prob = label == 1 ? -1.0 / p : 1.0 / (1.0 - p);
  return loss;
}

double softmax_xent_loss(const Vec& logits, int label, Vec* grad_logits) {
  if (label < 0 || label >= logits.size()) throw ContractViolation("softmax_xent_loss: label out of range");
  double m = logits.maxCoeff();
  Vec shifted = logits.array() - m;
  double lse = std::log(shifted.array().exp().sum());
  double loss = lse - shifted[label];
  if (grad_logits) {
    *grad_logits = (shifted.array() - lse).exp();
    (*grad_logits)[label] -= 1.0;
  }
  return loss;
}

double quantile_huber_loss(const Vec& quantiles, double target, double kappa, Vec* grad) {
  const auto k = quantiles.size();
  if (k < 1) throw ContractViolation("quantile_huber_loss: need at least one quantile");
  double loss = 0;
  if (grad) *grad = Vec::Zero(k);
  for (Eigen::Index q = 0; q < k; ++q) {
    double tau = (2.0 * static_cast<double>(q) + 1.0) / (2.0 * static_cast<double>(k));
    double u = target - quantiles[q];
    double huber = std::abs(u) <= kappa ? 0.5 * u * u : kappa * (std::abs(u) - 0.5 * kappa);
    double weight = std::abs(tau - (u < 0 ? 1.0 : 0.0));
    loss += weight * huber;
    if (grad) (*grad)[q] = -weight * std::clamp(u, -kappa, kappa);
  }
  loss /= static_cast<double>(k);
  if (grad) *grad /= static_cast<double>(k);
  return loss;
}

QEnsemble QEnsemble::create(int input_dim, int output_dim, int hidden_layers, int hidden_width,
                            int ensemble_size, Rng& rng) {
  if (ensemble_size < 1) throw ContractViolation("QEnsemble::create: ensemble size must be positive");
  QEnsemble e;
  for (int i = 0; i < ensemble_size; ++i) {
    e.members.push_back(Mlp::create(input_dim, output_dim, hidden_layers, hidden_width, rng));
  }
  e.targets = e.members;
  return e;
}

Mat QEnsemble::mean_forward(const Mat& input) const {
  Mat out = mlp_forward(members[0], input);
  for (std::size_t i = 1; i < members.size(); ++i) out += mlp_forward(members[i], input);
  return out / static_cast<double>(members.size());
}

Mat QEnsemble::mean_target_forward(const Mat& input) const {
  Mat out = mlp_forward(targets[0], input);
  for (std::size_t i = 1; i < targets.size(); ++i) out += mlp_forward(targets[i], input);
  return out / static_cast<double>(targets.size());
}

void QEnsemble::sync_targets() { targets = members; }

}  // namespace simstore
