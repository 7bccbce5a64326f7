#pragma once

#include "simstore/config.hpp"
#include "simstore/rng.hpp"
#include "simstore/types.hpp"

namespace simstore {

enum class CustomerKind { kRegular, kSleeperBadActor, kImmediateBadActor };

// Active -> Suspended -> {Abandoned, Reinstated}; bad actors never reinstate.
enum class AccountState { kActive, kSuspended, kAbandoned, kReinstated };

const char* to_string(CustomerKind kind);
const char* to_string(AccountState state);

struct Customer {
  CustomerId customer_id = 0;
  CustomerKind kind = CustomerKind::kRegular;
  AccountState state = AccountState::kActive;
  Time signup_time = 0;
  int sleeper_orders_before_attack = 0;  // Poisson-drawn at spawn, sleepers only
  int orders_placed = 0;

  bool can_order() const {
    return state == AccountState::kActive || state == AccountState::kReinstated;
  }

  bool is_bad_actor() const { return kind != CustomerKind::kRegular; }

  // Whether the customer's next order belongs to the attack phase.
  bool in_attack() const {
    switch (kind) {
      case CustomerKind::kImmediateBadActor:
        return true;
      case CustomerKind::kSleeperBadActor:
        return orders_placed >= sleeper_orders_before_attack;
      case CustomerKind::kRegular:
        return false;
    }
    return false;
  }
};

// Kind drawn from the configured population ratios; sleepers also draw their
// pre-attack order count.
Customer spawn_customer(const SimConfig& config, Rng& rng, Time now);

Customer spawn_customer_of_kind(CustomerKind kind, const SimConfig& config, Rng& rng, Time now);

// Exponential inter-order delay with the mean matching the customer's kind
// and phase, clipped at the configured maximum.
Time next_event_delay(const Customer& customer, const SimConfig& config, Rng& rng);

}  // namespace simstore
