#include "simstore/config.hpp"

#include <fstream>
#include <sstream>

#include "simstore/common.hpp"

namespace simstore {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void check_probability(double p, const char* name) {
  require(p >= 0.0 && p <= 1.0, std::string(name) + " must be in [0, 1]");
}

void check_positive(double v, const char* name) {
  require(v > 0.0, std::string(name) + " must be positive");
}

double unit_in_days(const std::string& unit) {
  if (unit == "minute" || unit == "minutes" || unit == "min") return minutes(1);
  if (unit == "hour" || unit == "hours" || unit == "h") return hours(1);
  if (unit == "day" || unit == "days" || unit == "d") return days(1);
  if (unit == "week" || unit == "weeks") return days(7);
  if (unit == "month" || unit == "months") return days(30);
  throw ConfigError("unknown duration unit '" + unit + "'");
}

}  // namespace

Time parse_duration_days(const nlohmann::json& value) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) throw ConfigError("duration must be a number (days) or a string like \"4 hours\"");
  std::istringstream in(value.get<std::string>());
  double amount = 0;
  std::string unit;
  if (!(in >> amount)) throw ConfigError("cannot parse duration '" + value.get<std::string>() + "'");
  if (!(in >> unit)) return amount;  // bare number in a string: days
  return amount * unit_in_days(unit);
}

std::string format_duration_days(Time d) {
  std::ostringstream out;
  if (d >= 1.0 || d == 0.0) {
    out << d << " days";
  } else if (d >= hours(1)) {
    out << d * 24.0 << " hours";
  } else {
    out << d * 24.0 * 60.0 << " minutes";
  }
  return out.str();
}

void RiskVarParams::validate() const {
  for (const BetaParams* p : {&payment_fraud, &payment_legit, &location_fraud, &location_legit}) {
    require(p->alpha > 0 && p->beta > 0, "risk variable Beta parameters must be positive");
  }
  require(payment_fraud.mean() > payment_legit.mean(),
          "payment risk: fraud mean must exceed non-fraud mean");
  require(location_fraud.mean() > location_legit.mean(),
          "location risk: fraud mean must exceed non-fraud mean");
}

void SimConfig::validate() const {
  require(num_initial_customers >= 0, "Number of customers must be non-negative");
  check_probability(ratio_regular, "Ratio of regular customers");
  check_probability(ratio_sleeper_among_bad, "Ratio of sleeper attack bad actors among bad actors");
  check_positive(mean_signup_interval_regular, "Mean time between new customer sign-ups, regular customer");
  check_positive(mean_signup_interval_bad, "Mean time between new customer sign-ups, bad actors");
  require(num_items >= 0, "Number of products must be non-negative");
  require(num_categories >= 1, "Number of product categories must be at least 1");
  check_positive(price_mean, "Item price, mean");
  check_positive(price_sd, "Item price, standard deviation");
  check_positive(regular_order_interval, "Regular customer, mean time between consecutive orders");
  check_probability(regular_reinstate_prob, "Regular customer, probability of reinstate");
  check_positive(regular_post_reinstate_interval,
                 "Regular customer, mean time between consecutive orders, post-reinstate");
  require(attack_target_percentile > 0 && attack_target_percentile <= 100,
          "Bad actor, percentile of most expensive items to target during attack must be in (0, 100]");
  require(sleeper_cheap_percentile > 0 && sleeper_cheap_percentile <= 100,
          "Bad actor, sleeper attack, percentile of cheapest items to target before attack must be in (0, 100]");
  check_positive(sleeper_pre_attack_interval,
                 "Bad actor, sleeper attack, mean time between consecutive orders before attack");
  require(sleeper_mean_orders_before_attack >= 0,
          "Bad actor, sleeper attack, mean number of orders before attack must be non-negative");
  check_probability(sleeper_pre_attack_chargeback_prob,
                    "Bad actor, sleeper attack, probability of chargeback before attack");
  check_probability(sleeper_attack_chargeback_prob,
                    "Bad actor, sleeper attack, probability of chargeback during attack");
  check_positive(sleeper_attack_interval,
                 "Bad actor, sleeper attack, mean time between consecutive orders during attack");
  check_probability(immediate_chargeback_prob, "Bad actor, immediate attack, probability of chargeback");
  check_positive(immediate_order_interval, "Bad actor, immediate attack, mean time between consecutive orders");
  check_positive(max_order_interval, "Maximum time between orders placed");
  check_positive(sim_duration, "Simulation duration");
  risk.validate();
}

namespace {

BetaParams beta_from_json(const nlohmann::json& j) {
  BetaParams p;
  p.alpha = j.at("alpha").get<double>();
  p.beta = j.at("beta").get<double>();
  return p;
}

nlohmann::json beta_to_json(const BetaParams& p) {
  return nlohmann::json{{"alpha", p.alpha}, {"beta", p.beta}};
}

}  // namespace

SimConfig sim_config_from_json(const nlohmann::json& store) {
  SimConfig c;
  auto num = [&](const char* key, double fallback) {
    return store.contains(key) ? store.at(key).get<double>() : fallback;
  };
  auto dur = [&](const char* key, Time fallback) {
    return store.contains(key) ? parse_duration_days(store.at(key)) : fallback;
  };

  c.num_initial_customers = static_cast<int>(num("Number of customers", c.num_initial_customers));
  c.ratio_regular = num("Ratio of regular customers", c.ratio_regular);
  c.ratio_sleeper_among_bad =
      num("Ratio of sleeper attack bad actors among bad actors", c.ratio_sleeper_among_bad);
  c.mean_signup_interval_regular =
      dur("Mean time between new customer sign-ups, regular customer", c.mean_signup_interval_regular);
  c.mean_signup_interval_bad =
      dur("Mean time between new customer sign-ups, bad actors", c.mean_signup_interval_bad);
  c.num_items = static_cast<int>(num("Number of products", c.num_items));
  c.num_categories = static_cast<int>(num("Number of product categories", c.num_categories));
  c.price_mean = num("Item price, mean", c.price_mean);
  c.price_sd = num("Item price, standard deviation", c.price_sd);
  c.regular_order_interval =
      dur("Regular customer, mean time between consecutive orders", c.regular_order_interval);
  c.regular_reinstate_prob = num("Regular customer, probability of reinstate", c.regular_reinstate_prob);
  c.regular_post_reinstate_interval =
      dur("Regular customer, mean time between consecutive orders, post-reinstate",
          c.regular_post_reinstate_interval);
  c.attack_target_percentile =
      num("Bad actor, percentile of most expensive items to target during attack", c.attack_target_percentile);
  c.sleeper_cheap_percentile =
      num("Bad actor, sleeper attack, percentile of cheapest items to target before attack",
          c.sleeper_cheap_percentile);
  c.sleeper_pre_attack_interval =
      dur("Bad actor, sleeper attack, mean time between consecutive orders before attack",
          c.sleeper_pre_attack_interval);
  c.sleeper_mean_orders_before_attack =
      num("Bad actor, sleeper attack, mean number of orders before attack", c.sleeper_mean_orders_before_attack);
  c.sleeper_pre_attack_chargeback_prob =
      num("Bad actor, sleeper attack, probability of chargeback before attack",
          c.sleeper_pre_attack_chargeback_prob);
  c.sleeper_attack_chargeback_prob =
      num("Bad actor, sleeper attack, probability of chargeback during attack", c.sleeper_attack_chargeback_prob);
  c.sleeper_attack_interval =
      dur("Bad actor, sleeper attack, mean time between consecutive orders during attack",
          c.sleeper_attack_interval);
  c.immediate_chargeback_prob =
      num("Bad actor, immediate attack, probability of chargeback", c.immediate_chargeback_prob);
  c.immediate_order_interval =
      dur("Bad actor, immediate attack, mean time between consecutive orders", c.immediate_order_interval);
  c.max_order_interval = dur("Maximum time between orders placed", c.max_order_interval);
  c.sim_duration = dur("Simulation duration", c.sim_duration);
  if (store.contains("Random seed")) c.rng_seed = store.at("Random seed").get<std::uint64_t>();

  if (store.contains("Risk variables")) {
    const auto& rv = store.at("Risk variables");
    if (rv.contains("payment_method_risk, fraud")) c.risk.payment_fraud = beta_from_json(rv.at("payment_method_risk, fraud"));
    if (rv.contains("payment_method_risk, non-fraud")) c.risk.payment_legit = beta_from_json(rv.at("payment_method_risk, non-fraud"));
    if (rv.contains("location_risk, fraud")) c.risk.location_fraud = beta_from_json(rv.at("location_risk, fraud"));
    if (rv.contains("location_risk, non-fraud")) c.risk.location_legit = beta_from_json(rv.at("location_risk, non-fraud"));
  }

  c.validate();
  return c;
}

nlohmann::json sim_config_to_json(const SimConfig& c) {
  nlohmann::json store;
  store["Number of customers"] = c.num_initial_customers;
  store["Ratio of regular customers"] = c.ratio_regular;
  store["Ratio of sleeper attack bad actors among bad actors"] = c.ratio_sleeper_among_bad;
  store["Mean time between new customer sign-ups, regular customer"] =
      format_duration_days(c.mean_signup_interval_regular);
  store["Mean time between new customer sign-ups, bad actors"] =
      format_duration_days(c.mean_signup_interval_bad);
  store["Number of products"] = c.num_items;
  store["Number of product categories"] = c.num_categories;
  store["Item price, mean"] = c.price_mean;
  store["Item price, standard deviation"] = c.price_sd;
  store["Regular customer, mean time between consecutive orders"] =
      format_duration_days(c.regular_order_interval);
  store["Regular customer, probability of reinstate"] = c.regular_reinstate_prob;
  store["Regular customer, mean time between consecutive orders, post-reinstate"] =
      format_duration_days(c.regular_post_reinstate_interval);
  store["Bad actor, percentile of most expensive items to target during attack"] = c.attack_target_percentile;
  store["Bad actor, sleeper attack, percentile of cheapest items to target before attack"] =
      c.sleeper_cheap_percentile;
  store["Bad actor, sleeper attack, mean time between consecutive orders before attack"] =
      format_duration_days(c.sleeper_pre_attack_interval);
  store["Bad actor, sleeper attack, mean number of orders before attack"] = c.sleeper_mean_orders_before_attack;
  store["Bad actor, sleeper attack, probability of chargeback before attack"] =
      c.sleeper_pre_attack_chargeback_prob;
  store["Bad actor, sleeper attack, probability of chargeback during attack"] = c.sleeper_attack_chargeback_prob;
  store["Bad actor, sleeper attack, mean time between consecutive orders during attack"] =
      format_duration_days(c.sleeper_attack_interval);
  store["Bad actor, immediate attack, probability of chargeback"] = c.immediate_chargeback_prob;
  store["Bad actor, immediate attack, mean time between consecutive orders"] =
      format_duration_days(c.immediate_order_interval);
  store["Maximum time between orders placed"] = format_duration_days(c.max_order_interval);
  store["Simulation duration"] = format_duration_days(c.sim_duration);
  store["Random seed"] = c.rng_seed;
  store["Risk variables"] = nlohmann::json{
      {"payment_method_risk, fraud", beta_to_json(c.risk.payment_fraud)},
      {"payment_method_risk, non-fraud", beta_to_json(c.risk.payment_legit)},
      {"location_risk, fraud", beta_to_json(c.risk.location_fraud)},
      {"location_risk, non-fraud", beta_to_json(c.risk.location_legit)},
  };
  return store;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
}

}  // namespace simstore
