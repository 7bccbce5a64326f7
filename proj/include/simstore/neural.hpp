#pragma once

#include <vector>

#include "simstore/rng.hpp"
#include "simstore/types.hpp"

namespace simstore {

// Fully connected network: rectified hidden layers of equal width, linear
// output. Batches are column-major (one sample per column).
struct Mlp {
  std::vector<Mat> weights;  // weights[l] is (out x in)
  std::vector<Vec> biases;

  int input_dim() const { return static_cast<int>(weights.front().cols()); }
  int output_dim() const { return static_cast<int>(weights.back().rows()); }
  std::size_t num_layers() const { return weights.size(); }

  // Uniform init scaled by fan-in.
  static Mlp create(int input_dim, int output_dim, int hidden_layers, int hidden_width, Rng& rng);
};

struct ForwardCache {
  std::vector<Mat> activations;  // activations[0] = input, .back() = output
};

Mat mlp_forward(const Mlp& net, const Mat& input, ForwardCache* cache = nullptr);

struct MlpGrads {
  std::vector<Mat> weights;
  std::vector<Vec> biases;
  static MlpGrads zeros_like(const Mlp& net);
  void set_zero();
};

// Analytic gradients for the cached forward pass; overwrites `grads`.
void mlp_backward(const Mlp& net, const ForwardCache& cache, const Mat& output_grad,
                  MlpGrads& grads);

struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long long step = 0;
  std::vector<Mat> m_w, v_w;
  std::vector<Vec> m_b, v_b;

  static AdamState create(const Mlp& net, double lr);
};

// Bias-corrected Adam update in place.
void adam_step(AdamState& state, Mlp& net, const MlpGrads& grads);

Vec softmax(const Vec& x);
double logsumexp(const Vec& x);

// Mean squared error over all entries; gradient w.r.t. pred.
double mse_loss(const Vec& pred, const Vec& target, Vec* grad = nullptr);

// Binary cross entropy on a probability; prob clamped away from {0, 1}.
double bce_loss(double prob, int label, double* grad_prob = nullptr);

// Categorical cross entropy on raw logits (numerically stable).
double softmax_xent_loss(const Vec& logits, int label, Vec* grad_logits = nullptr);

// Quantile regression loss of K predicted quantiles against a scalar target,
// Huber-smoothed with width kappa, averaged over quantiles.
double quantile_huber_loss(const Vec& quantiles, double target, double kappa, Vec* grad = nullptr);

// Independently initialized value networks whose elementwise mean is the
// prediction, each paired with a delayed target copy.
struct QEnsemble {
  std::vector<Mlp> members;
  std::vector<Mlp> targets;
  int target_update_freq = 1;  // in gradient steps; enforced by the trainer

  static QEnsemble create(int input_dim, int output_dim, int hidden_layers, int hidden_width,
                          int ensemble_size, Rng& rng);

  Mat mean_forward(const Mat& input) const;
  Mat mean_target_forward(const Mat& input) const;
  void sync_targets();  // targets become bit-equal copies of the members
};

}  // namespace simstore
