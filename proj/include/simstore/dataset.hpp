#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "simstore/feature_gen.hpp"
#include "simstore/rng.hpp"
#include "simstore/types.hpp"

namespace simstore {

// One logged order evaluation. next_obs is the same customer's next
// evaluated order; records without one are terminal.
struct TransitionRecord {
  Vec obs;
  Time time = 0;
  int action = 0;
  CustomerId customer_id = -1;
  double reward = 0;
  int inferred_outcome = 0;
  Vec next_obs;  // size 0 iff terminal
  bool terminal = true;
};

// Chronological per-customer slice of the log; indices into Dataset::records.
struct Episode {
  CustomerId customer_id = -1;
  std::vector<int> records;
};

struct Dataset {
  std::vector<TransitionRecord> records;  // chronological log order
  std::vector<Episode> episodes;

  static Dataset from_records(std::vector<TransitionRecord> records);
  std::size_t size() const { return records.size(); }
};

// Groups the log into per-customer episodes (order of first appearance) and
// checks episode invariants: strictly increasing timestamps, terminal last.
std::vector<Episode> group_episodes(const std::vector<TransitionRecord>& records);

// Time-discounted return of the episode suffix starting at position i:
//   R_i = sum_{j >= i} r_j * gamma^((t_j - t_i) / time_unit), gamma^0 = 1.
double compute_return(const std::vector<TransitionRecord>& records, const Episode& episode, int i,
                      double gamma, Time time_unit);

// n-step target: discounted reward sum over min(n, remaining) records plus a
// discounted bootstrap on the following observation when the episode has not
// terminated within those steps. q_target maps an observation to per-action
// values; the bootstrap uses their maximum.
double n_step_target(const std::vector<TransitionRecord>& records, const Episode& episode, int i,
                     int n, double gamma, Time time_unit,
                     const std::function<Vec(const Vec&)>& q_target);

// Episode-wise split: every episode's records land whole in one side.
struct Split {
  std::vector<int> train;  // record indices
  std::vector<int> test;
};
Split split_episodes(const Dataset& dataset, double train_fraction, Rng& rng);
// Order-level split used by the tree-based classifier.
Split split_orders(const Dataset& dataset, double train_fraction, Rng& rng);

// Feature and reward transforms fitted on the training split only.
struct NormalizationSpec {
  enum class Mode { kMinmax, kStandard, kNone };
  Mode mode = Mode::kNone;
  Vec stat_a;           // per-feature min (minmax) or mean (standard)
  Vec stat_b;           // per-feature max or sd
  double reward_scale = 1.0;  // max |r| over the training split

  Vec apply_obs(const Vec& obs) const;
  double apply_reward(double reward) const;

  static Mode mode_from_string(const std::string& name);
  static std::string mode_to_string(Mode mode);
};

NormalizationSpec fit_normalizer(const std::vector<TransitionRecord>& records,
                                 const std::vector<int>& train_indices,
                                 NormalizationSpec::Mode mode);

// Line-delimited text files: a header naming every column, then one record
// per line. Doubles are printed round-trip exact. A ".meta.json" sidecar
// carries provenance (config, level, seed).
void write_dataset(const std::string& path, const std::vector<TransitionRecord>& records);
std::vector<TransitionRecord> read_dataset(const std::string& path);

void write_dataset_metadata(const std::string& dataset_path, const nlohmann::json& metadata);
nlohmann::json read_dataset_metadata(const std::string& dataset_path);

}  // namespace simstore
