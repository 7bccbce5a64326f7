#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "simstore/types.hpp"

namespace simstore {

struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;
  double mean() const { return alpha / (alpha + beta); }
};

// Beta parameters for the synthetic payment/location risk variables,
// conditioned on the true intent of the order.
struct RiskVarParams {
  BetaParams payment_fraud{5.0, 2.0};
  BetaParams payment_legit{2.0, 5.0};
  BetaParams location_fraud{5.0, 2.0};
  BetaParams location_legit{2.0, 5.0};
  void validate() const;
};

struct SimConfig {
  int num_initial_customers = 1000;
  double ratio_regular = 0.8;
  double ratio_sleeper_among_bad = 0.2;
  Time mean_signup_interval_regular = hours(4);
  Time mean_signup_interval_bad = minutes(15);

  int num_items = 1000;
  int num_categories = 20;
  double price_mean = 50.0;  // moments of the resulting price distribution
  double price_sd = 100.0;

  Time regular_order_interval = days(2);
  double regular_reinstate_prob = 0.2;
  Time regular_post_reinstate_interval = days(4);

  double attack_target_percentile = 10.0;  // top-priced band, percent
  double sleeper_cheap_percentile = 10.0;  // bottom-priced band, percent
  Time sleeper_pre_attack_interval = days(2);
  double sleeper_mean_orders_before_attack = 5.0;
  double sleeper_pre_attack_chargeback_prob = 0.01;
  double sleeper_attack_chargeback_prob = 0.99;
  Time sleeper_attack_interval = hours(6);

  double immediate_chargeback_prob = 0.99;
  Time immediate_order_interval = hours(6);

  Time max_order_interval = days(30);  // clip for inter-order exponential draws
  Time sim_duration = days(90);
  std::uint64_t rng_seed = 0;

  RiskVarParams risk;

  void validate() const;  // throws ConfigError on any violated invariant
};

// Durations in config files are either plain numbers (days) or strings like
// "4 hours", "15 minutes", "2 days", "3 months" (month = 30 days).
Time parse_duration_days(const nlohmann::json& value);
std::string format_duration_days(Time d);

// Reads/writes the store section, keyed by the hyperparameter names of the
// simulation ("Number of customers", "Ratio of regular customers", ...).
SimConfig sim_config_from_json(const nlohmann::json& store);
nlohmann::json sim_config_to_json(const SimConfig& config);

// Loads a JSON config file; throws ConfigError if unreadable or unparseable.
nlohmann::json load_json_file(const std::string& path);

}  // namespace simstore
