#include "simstore/customer.hpp"

#include <algorithm>

#include "simstore/common.hpp"

namespace simstore {

const char* to_string(CustomerKind kind) {
  switch (kind) {
    case CustomerKind::kRegular: return "regular";
    case CustomerKind::kSleeperBadActor: return "sleeper_bad_actor";
    case CustomerKind::kImmediateBadActor: return "immediate_bad_actor";
  }
  return "?";
}

const char* to_string(AccountState state) {
  switch (state) {
    case AccountState::kActive: return "active";
    case AccountState::kSuspended: return "suspended";
    case AccountState::kAbandoned: return "abandoned";
    case AccountState::kReinstated: return "reinstated";
  }
  return "?";
}

Customer spawn_customer(const SimConfig& config, Rng& rng, Time now) {
  CustomerKind kind;
  if (rng.bernoulli(config.ratio_regular)) {
    kind = CustomerKind::kRegular;
  } else if (rng.bernoulli(config.ratio_sleeper_among_bad)) {
    kind = CustomerKind::kSleeperBadActor;
  } else {
    kind = CustomerKind::kImmediateBadActor;
  }
  return spawn_customer_of_kind(kind, config, rng, now);
}

Customer spawn_customer_of_kind(CustomerKind kind, const SimConfig& config, Rng& rng, Time now) {
  Customer c;
  c.kind = kind;
  c.signup_time = now;
  if (kind == CustomerKind::kSleeperBadActor) {
    c.sleeper_orders_before_attack = rng.poisson(config.sleeper_mean_orders_before_attack);
  }
  return c;
}

Time next_event_delay(const Customer& customer, const SimConfig& config, Rng& rng) {
  if (!customer.can_order()) {
    throw ContractViolation("next_event_delay: customer cannot place orders");
  }
  Time mean = 0;
  switch (customer.kind) {
    case CustomerKind::kRegular:
      mean = customer.state == AccountState::kReinstated ? config.regular_post_reinstate_interval
                                                         : config.regular_order_interval;
      break;
    case CustomerKind::kSleeperBadActor:
      mean = customer.in_attack() ? config.sleeper_attack_interval : config.sleeper_pre_attack_interval;
      break;
    case CustomerKind::kImmediateBadActor:
      mean = config.immediate_order_interval;
      break;
  }
  return std::min(rng.exponential(mean), config.max_order_interval);
}

}  // namespace simstore
