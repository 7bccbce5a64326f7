#include "simstore/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "simstore/common.hpp"

namespace simstore {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double logit(double p) { return std::log(p / (1.0 - p)); }

int sample_count(double fraction, int total) {
  return std::clamp(static_cast<int>(std::lround(fraction * total)), 1, total);
}

std::vector<int> sample_without_replacement(const std::vector<int>& pool, int k, Rng& rng) {
  std::vector<int> picked = pool;
  rng.shuffle(picked);
  picked.resize(static_cast<std::size_t>(k));
  std::sort(picked.begin(), picked.end());
  return picked;
}

struct NodeStats {
  double grad_sum = 0;
  double hess_sum = 0;
  int count = 0;
};

struct SplitChoice {
  double gain = 0;
  int feature = -1;
  double threshold = 0;
  NodeStats left;
};

}  // namespace

void GbtHyperparams::validate() const {
  auto fraction_ok = [](double f) { return f > 0.0 && f <= 1.0; };
  if (max_trees < 1) throw ConfigError("max number of trees must be at least 1");
  if (max_depth < 1) throw ConfigError("max depth must be at least 1");
  if (learning_rate < 0) throw ConfigError("learning rate must be non-negative");
  if (!fraction_ok(colsample_bytree) || !fraction_ok(colsample_bylevel) || !fraction_ok(subsample)) {
    throw ConfigError("colsample/subsample fractions must be in (0, 1]");
  }
  if (scale_pos_weight <= 0) throw ConfigError("scale pos weight must be positive");
  if (early_stop_patience < 1) throw ConfigError("early stop patience must be at least 1");
  if (base_score <= 0 || base_score >= 1) throw ConfigError("base score must be in (0, 1)");
}

double GbtTree::predict(const Vec& x) const {
  int node = 0;
  while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const GbtNode& nd = nodes[static_cast<std::size_t>(node)];
    node = x[nd.feature] < nd.threshold ? nd.left : nd.right;
  }
  return nodes[static_cast<std::size_t>(node)].value;
}

double GbtModel::predict_margin(const Vec& x) const {
  if (x.size() != num_features) throw ContractViolation("predict: feature count mismatch");
  double margin = base_margin;
  for (const GbtTree& tree : trees) margin += tree.predict(x);
  return margin;
}

double GbtModel::predict_proba(const Vec& x) const { return sigmoid(predict_margin(x)); }

double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw ContractViolation("roc_auc: size mismatch");
  std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (int y : labels) n_pos += static_cast<std::size_t>(y == 1);
  std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw DataError("roc_auc: needs both classes");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Average ranks within tie groups, then the rank-sum statistic.
  double pos_rank_sum = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) pos_rank_sum += avg_rank;
    }
    i = j + 1;
  }
  double u = pos_rank_sum - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

GbtModel fit_gbt(const Mat& X, const std::vector<int>& y, const Mat& X_valid,
                 const std::vector<int>& y_valid, const GbtHyperparams& hp, Rng& rng,
                 GbtFitInfo* info) {
  hp.validate();
  const int n = static_cast<int>(X.rows());
  const int num_features = static_cast<int>(X.cols());
  if (n != static_cast<int>(y.size())) throw ContractViolation("fit_gbt: label count mismatch");
  if (X_valid.rows() != static_cast<Eigen::Index>(y_valid.size())) {
    throw ContractViolation("fit_gbt: validation label count mismatch");
  }
  int pos = 0;
  for (int label : y) pos += label == 1;
  if (pos == 0 || pos == n) throw DataError("fit_gbt: training data has a single class");

  // Presort row indices once per feature; ties keep index order.
  std::vector<std::vector<int>> sorted_rows(static_cast<std::size_t>(num_features));
  for (int f = 0; f < num_features; ++f) {
    auto& idx = sorted_rows[static_cast<std::size_t>(f)];
    idx.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return X(a, f) < X(b, f); });
  }

  std::vector<int> all_features(static_cast<std::size_t>(num_features));
  for (int f = 0; f < num_features; ++f) all_features[static_cast<std::size_t>(f)] = f;
  std::vector<int> all_rows(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all_rows[static_cast<std::size_t>(i)] = i;

  GbtModel model;
  model.num_features = num_features;
  model.base_margin = logit(hp.base_score);

  Vec margins = Vec::Constant(n, model.base_margin);
  std::vector<double> valid_scores(y_valid.size(), model.base_margin);

  GbtFitInfo local_info;
  GbtFitInfo& fit = info ? *info : local_info;
  fit = GbtFitInfo{};

  Vec grad(n), hess(n);
  std::vector<int> node_of_row(static_cast<std::size_t>(n));

  for (int round = 0; round < hp.max_trees; ++round) {
    for (int i = 0; i < n; ++i) {
      double p = sigmoid(margins[i]);
      double g = p - static_cast<double>(y[static_cast<std::size_t>(i)]);
      double h = p * (1.0 - p);
      if (y[static_cast<std::size_t>(i)] == 1) {
        g *= hp.scale_pos_weight;
        h *= hp.scale_pos_weight;
      }
      grad[i] = g;
      hess[i] = h;
    }

    std::fill(node_of_row.begin(), node_of_row.end(), -1);
    NodeStats root;
    if (hp.subsample < 1.0) {
      auto rows = sample_without_replacement(all_rows, sample_count(hp.subsample, n), rng);
      for (int i : rows) node_of_row[static_cast<std::size_t>(i)] = 0;
    } else {
      std::fill(node_of_row.begin(), node_of_row.end(), 0);
    }
    for (int i = 0; i < n; ++i) {
      if (node_of_row[static_cast<std::size_t>(i)] == 0) {
        root.grad_sum += grad[i];
        root.hess_sum += hess[i];
        root.count += 1;
      }
    }

    std::vector<int> tree_features =
        hp.colsample_bytree < 1.0
            ? sample_without_replacement(all_features, sample_count(hp.colsample_bytree, num_features), rng)
            : all_features;

    GbtTree tree;
    tree.nodes.push_back(GbtNode{});
    std::vector<NodeStats> node_stats{root};
    std::vector<int> active{0};

    for (int depth = 0; depth < hp.max_depth && !active.empty(); ++depth) {
      std::vector<int> level_features =
          hp.colsample_bylevel < 1.0
              ? sample_without_replacement(
                    tree_features, sample_count(hp.colsample_bylevel, static_cast<int>(tree_features.size())),
                    rng)
              : tree_features;

      // Best split per active node, scanning each feature's presorted rows.
      std::vector<SplitChoice> best(active.size());
      std::vector<int> slot_of_node(tree.nodes.size(), -1);
      for (std::size_t s = 0; s < active.size(); ++s) slot_of_node[static_cast<std::size_t>(active[s])] = static_cast<int>(s);

      std::vector<NodeStats> left_acc(active.size());
      std::vector<double> last_value(active.size());
      for (int f : level_features) {
        for (auto& acc : left_acc) acc = NodeStats{};
        std::vector<bool> started(active.size(), false);
        for (int row : sorted_rows[static_cast<std::size_t>(f)]) {
          int node = node_of_row[static_cast<std::size_t>(row)];
          if (node < 0 || slot_of_node[static_cast<std::size_t>(node)] < 0) continue;
          int s = slot_of_node[static_cast<std::size_t>(node)];
          double value = X(row, f);
          NodeStats& acc = left_acc[static_cast<std::size_t>(s)];
          if (started[static_cast<std::size_t>(s)] && value != last_value[static_cast<std::size_t>(s)] &&
              acc.count > 0 && acc.count < node_stats[static_cast<std::size_t>(active[s])].count) {
            const NodeStats& total = node_stats[static_cast<std::size_t>(active[s])];
            double hr = total.hess_sum - acc.hess_sum;
            if (acc.hess_sum >= hp.min_child_weight && hr >= hp.min_child_weight) {
              double gr = total.grad_sum - acc.grad_sum;
              double gain = 0.5 * (acc.grad_sum * acc.grad_sum / (acc.hess_sum + hp.reg_lambda) +
                                   gr * gr / (hr + hp.reg_lambda) -
                                   total.grad_sum * total.grad_sum / (total.hess_sum + hp.reg_lambda)) -
                            hp.min_split_gain;
              SplitChoice& choice = best[static_cast<std::size_t>(s)];
              if (gain > choice.gain) {
                choice.gain = gain;
                choice.feature = f;
                choice.threshold = (last_value[static_cast<std::size_t>(s)] + value) / 2.0;
                choice.left = acc;
              }
            }
          }
          acc.grad_sum += grad[row];
          acc.hess_sum += hess[row];
          acc.count += 1;
          last_value[static_cast<std::size_t>(s)] = value;
          started[static_cast<std::size_t>(s)] = true;
        }
      }

      // Apply the chosen splits and reassign rows.
      std::vector<int> next_active;
      for (std::size_t s = 0; s < active.size(); ++s) {
        const SplitChoice& choice = best[s];
        if (choice.feature < 0 || choice.gain <= 0.0) continue;  // stays a leaf
        int node_id = active[s];
        GbtNode& nd = tree.nodes[static_cast<std::size_t>(node_id)];
        nd.feature = choice.feature;
        nd.threshold = choice.threshold;
        nd.left = static_cast<int>(tree.nodes.size());
        nd.right = nd.left + 1;
        tree.nodes.push_back(GbtNode{});
        tree.nodes.push_back(GbtNode{});
        NodeStats right;
        const NodeStats& total = node_stats[static_cast<std::size_t>(node_id)];
        right.grad_sum = total.grad_sum - choice.left.grad_sum;
        right.hess_sum = total.hess_sum - choice.left.hess_sum;
        right.count = total.count - choice.left.count;
        node_stats.push_back(choice.left);
        node_stats.push_back(right);
        next_active.push_back(nd.left);
        next_active.push_back(nd.right);
      }
      for (int row = 0; row < n; ++row) {
        int node = node_of_row[static_cast<std::size_t>(row)];
        if (node < 0) continue;
        const GbtNode& nd = tree.nodes[static_cast<std::size_t>(node)];
        if (nd.feature < 0) continue;
        node_of_row[static_cast<std::size_t>(row)] = X(row, nd.feature) < nd.threshold ? nd.left : nd.right;
      }
      active = std::move(next_active);
    }

    // Leaf values.
    for (std::size_t node_id = 0; node_id < tree.nodes.size(); ++node_id) {
      GbtNode& nd = tree.nodes[node_id];
      if (nd.feature >= 0) continue;
      const NodeStats& stats = node_stats[node_id];
      nd.value = -stats.grad_sum / (stats.hess_sum + hp.reg_lambda) * hp.learning_rate;
    }

    for (int i = 0; i < n; ++i) margins[i] += tree.predict(X.row(i).transpose());
    for (std::size_t i = 0; i < y_valid.size(); ++i) {
      valid_scores[i] += tree.predict(X_valid.row(static_cast<Eigen::Index>(i)).transpose());
    }
    model.trees.push_back(std::move(tree));
    fit.rounds_built = round + 1;

    double auc = roc_auc(valid_scores, y_valid);
    if (fit.best_round < 0 || auc > fit.best_auc) {
      fit.best_auc = auc;
      fit.best_round = round;
    } else if (round - fit.best_round >= hp.early_stop_patience) {
      break;
    }
  }

  model.trees.resize(static_cast<std::size_t>(fit.best_round + 1));
  return model;
}

ThresholdMetric threshold_metric_from_string(const std::string& name) {
  if (name == "f1") return ThresholdMetric::kF1;
  if (name == "reward") return ThresholdMetric::kReward;
  throw ConfigError("unknown threshold choice metric '" + name + "'");
}

std::string to_string(ThresholdMetric metric) {
  return metric == ThresholdMetric::kF1 ? "f1" : "reward";
}

double select_threshold(const std::vector<double>& probs, const std::vector<int>& labels,
                        const std::vector<double>& prices, ThresholdMetric metric) {
  const std::size_t n = probs.size();
  if (labels.size() != n || (metric == ThresholdMetric::kReward && prices.size() != n)) {
    throw ContractViolation("select_threshold: input size mismatch");
  }
  if (n == 0) throw DataError("select_threshold: empty validation set");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return probs[a] < probs[b]; });

  // Prefix aggregates over the pass set (probabilities <= threshold).
  std::vector<double> reward_prefix(n + 1, 0.0);
  std::vector<int> pos_prefix(n + 1, 0);
  int total_pos = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t i = order[k];
    double pass_value = metric == ThresholdMetric::kReward
                            ? (labels[i] == 0 ? prices[i] : -prices[i])
                            : 0.0;
    reward_prefix[k + 1] = reward_prefix[k] + pass_value;
    pos_prefix[k + 1] = pos_prefix[k] + (labels[i] == 1 ? 1 : 0);
    total_pos += labels[i] == 1 ? 1 : 0;
  }

  // Candidate k = number of passed records: 0 (threshold 0), group boundaries
  // (midpoints), n (threshold 1).
  auto candidate_threshold = [&](std::size_t k) {
    if (k == 0) return 0.0;
    if (k == n) return 1.0;
    return (probs[order[k - 1]] + probs[order[k]]) / 2.0;
  };
  auto score_at = [&](std::size_t k) {
    if (metric == ThresholdMetric::kReward) return reward_prefix[k];
    // F1 of the fraud class: predictions are "fraud" for the n-k records
    // above the threshold.
    double tp = static_cast<double>(total_pos - pos_prefix[k]);
    double fp = static_cast<double>((n - k)) - tp;
    double fn = static_cast<double>(pos_prefix[k]);
    double denom = 2.0 * tp + fp + fn;
    return denom == 0.0 ? 0.0 : 2.0 * tp / denom;
  };

  double best_score = score_at(0);
  double best_threshold = candidate_threshold(0);
  for (std::size_t k = 1; k <= n; ++k) {
    if (k < n && probs[order[k - 1]] == probs[order[k]]) continue;  // not a boundary
    double s = score_at(k);
    if (s > best_score) {
      best_score = s;
      best_threshold = candidate_threshold(k);
    }
  }
  return best_threshold;
}

void GbtModel::save(std::ostream& out) const {
  out << "gbt v1\n";
  out << "num_features " << num_features << "\n";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", base_margin);
  out << "base_margin " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", threshold);
  out << "threshold " << buf << " " << threshold_metric << "\n";
  out << "trees " << trees.size() << "\n";
  for (const GbtTree& tree : trees) {
    out << "tree " << tree.nodes.size() << "\n";
    for (const GbtNode& nd : tree.nodes) {
      std::snprintf(buf, sizeof(buf), "%.17g", nd.threshold);
      out << nd.feature << " " << buf << " " << nd.left << " " << nd.right << " ";
      std::snprintf(buf, sizeof(buf), "%.17g", nd.value);
      out << buf << "\n";
    }
  }
}

GbtModel GbtModel::load(std::istream& in) {
  auto expect = [&](const std::string& tag) {
    std::string word;
    if (!(in >> word) || word != tag) throw DataError("gbt model: expected '" + tag + "'");
  };
  std::string word;
  expect("gbt");
  in >> word;
  if (word != "v1") throw DataError("gbt model: unsupported version");
  GbtModel model;
  expect("num_features");
  in >> model.num_features;
  expect("base_margin");
  in >> model.base_margin;
  expect("threshold");
  in >> model.threshold >> model.threshold_metric;
  expect("trees");
  std::size_t num_trees = 0;
  in >> num_trees;
  for (std::size_t t = 0; t < num_trees; ++t) {
    expect("tree");
    std::size_t num_nodes = 0;
    in >> num_nodes;
    GbtTree tree;
    tree.nodes.resize(num_nodes);
    for (GbtNode& nd : tree.nodes) {
      in >> nd.feature >> nd.threshold >> nd.left >> nd.right >> nd.value;
    }
    model.trees.push_back(std::move(tree));
  }
  if (!in) throw DataError("gbt model: truncated file");
  return model;
}

}  // namespace simstore
