#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "simstore/rng.hpp"
#include "simstore/types.hpp"

namespace simstore {

struct GbtHyperparams {
  int max_trees = 500;
  int max_depth = 3;
  double learning_rate = 0.1;
  double colsample_bytree = 1.0;
  double colsample_bylevel = 1.0;
  double subsample = 1.0;
  double scale_pos_weight = 1.0;
  int early_stop_patience = 50;  // boosting rounds without validation AUC improvement

  // Package defaults for knobs the search never touches.
  double reg_lambda = 1.0;
  double min_child_weight = 1.0;
  double min_split_gain = 0.0;
  double base_score = 0.5;

  void validate() const;
};

struct GbtNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // x[feature] < threshold goes left
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf weight, learning rate already applied
};

struct GbtTree {
  std::vector<GbtNode> nodes;  // nodes[0] is the root
  double predict(const Vec& x) const;
};

// Boosted binary classifier with a decision threshold: fraud when the
// predicted probability exceeds it.
struct GbtModel {
  std::vector<GbtTree> trees;
  double base_margin = 0.0;
  double threshold = 1.0;
  std::string threshold_metric = "f1";
  int num_features = 0;

  double predict_margin(const Vec& x) const;
  double predict_proba(const Vec& x) const;  // sigmoid of the summed margins

  void save(std::ostream& out) const;
  static GbtModel load(std::istream& in);
};

struct GbtFitInfo {
  int rounds_built = 0;
  int best_round = -1;  // round index with the best validation AUC
  double best_auc = 0.0;
};

// Second-order logistic boosting with exact greedy splits over sorted unique
// values. X is (samples x features). Stops when validation ROC-AUC has not
// improved for `early_stop_patience` rounds and keeps the best-AUC round
// count.
GbtModel fit_gbt(const Mat& X, const std::vector<int>& y, const Mat& X_valid,
                 const std::vector<int>& y_valid, const GbtHyperparams& hp, Rng& rng,
                 GbtFitInfo* info = nullptr);

// Rank-based ROC-AUC with 0.5 credit for score ties.
double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

enum class ThresholdMetric { kF1, kReward };
ThresholdMetric threshold_metric_from_string(const std::string& name);
std::string to_string(ThresholdMetric metric);

// Scans candidate thresholds (midpoints between consecutive distinct
// validation probabilities, plus 0 and 1). f1 maximizes F1 of the fraud
// class; reward maximizes the summed value of passed orders, estimated from
// price and label. Ties resolve to the smaller threshold.
double select_threshold(const std::vector<double>& probs, const std::vector<int>& labels,
                        const std::vector<double>& prices, ThresholdMetric metric);

}  // namespace simstore
