#include "simstore/sim_core.hpp"

#include "simstore/common.hpp"

namespace simstore {

namespace {
constexpr std::uint64_t kInventoryStream = 0x01;
constexpr std::uint64_t kWorldStream = 0x02;
constexpr std::uint64_t kCustomerStreamBase = 0x100000;
}  // namespace

Order originate_order(Customer& customer, const Inventory& inventory, const SimConfig& config,
                      Rng& rng, Time now) {
  if (!customer.can_order()) {
    throw ContractViolation("originate_order: customer cannot place orders");
  }
  if (inventory.items.empty()) {
    throw SimulationError("originate_order: inventory is empty");
  }

  const std::vector<int>* pool = nullptr;
  double chargeback_prob = 0;
  switch (customer.kind) {
    case CustomerKind::kRegular:
      chargeback_prob = 0;  // regular customers never intend fraud
      break;
    case CustomerKind::kSleeperBadActor:
      if (customer.in_attack()) {
        pool = &inventory.expensive_band;
        chargeback_prob = config.sleeper_attack_chargeback_prob;
      } else {
        pool = &inventory.cheap_band;
        chargeback_prob = config.sleeper_pre_attack_chargeback_prob;
      }
      break;
    case CustomerKind::kImmediateBadActor:
      pool = &inventory.expensive_band;
      chargeback_prob = config.immediate_chargeback_prob;
      break;
  }

  int item_id;
  if (pool) {
    item_id = (*pool)[rng.uniform_index(pool->size())];
  } else {
    item_id = inventory.items[rng.uniform_index(inventory.items.size())].item_id;
  }

  Order order;
  order.customer_id = customer.customer_id;
  order.item_id = item_id;
  order.price = inventory.items[static_cast<std::size_t>(item_id)].price;
  order.time = now;
  order.true_outcome = chargeback_prob > 0 && rng.bernoulli(chargeback_prob) ? 1 : 0;
  customer.orders_placed += 1;
  return order;
}

ApplyResult apply_action(const Order& order, Action action, Customer& customer, Ledger& ledger,
                         const SimConfig& config, Rng& rng) {
  if (!customer.can_order()) {
    throw ContractViolation("apply_action: customer cannot place orders");
  }
  ApplyResult result;
  if (action == Action::kPass) {
    if (order.true_outcome == 0) {
      result.reward = order.price;
      result.inferred_outcome = 0;
      ledger.revenue += order.price;
    } else {
      result.reward = -order.price;
      result.inferred_outcome = 1;
      result.chargeback = true;
      ledger.chargeback_loss += order.price;
    }
    return result;
  }

  // Fraud: order cancelled, account suspended, no financial impact.
  result.reward = 0;
  customer.state = AccountState::kSuspended;
  if (customer.kind == CustomerKind::kRegular) {
    if (rng.bernoulli(config.regular_reinstate_prob)) {
      customer.state = AccountState::kReinstated;
      result.inferred_outcome = 0;
    } else {
      // Abandonment records the order as fraud even though it was not
      // (label bias).
      customer.state = AccountState::kAbandoned;
      result.inferred_outcome = 1;
    }
  } else {
    // Bad actors never reinstate; suspension is permanent.
    result.inferred_outcome = 1;
  }
  return result;
}

Environment::Environment(SimConfig config, std::uint64_t seed)
    : config_(std::move(config)), seed_(seed), world_rng_(0) {
  config_.validate();
}

void Environment::push_event(Time time, CustomerId customer_id, EventType type) {
  events_.push(Event{time, customer_id, event_seq_++, type});
}

CustomerId Environment::add_customer(Customer c) {
  CustomerId id = static_cast<CustomerId>(customers_.size());
  c.customer_id = id;
  customers_.push_back(std::move(c));
  customer_streams_.emplace_back(Rng::derive(seed_, kCustomerStreamBase + static_cast<std::uint64_t>(id)));
  return id;
}

void Environment::schedule_next_order(CustomerId id) {
  Customer& c = customers_[static_cast<std::size_t>(id)];
  Time delay = next_event_delay(c, config_, customer_streams_[static_cast<std::size_t>(id)]);
  push_event(clock_ + delay, id, EventType::kOrderArrival);
}

StepResult Environment::reset() {
  Rng inventory_rng(Rng::derive(seed_, kInventoryStream));
  inventory_ = build_inventory(config_, inventory_rng);
  world_rng_ = Rng(Rng::derive(seed_, kWorldStream));
  customers_.clear();
  customer_streams_.clear();
  history_.clear();
  ledger_ = Ledger{};
  events_ = {};
  event_seq_ = 0;
  next_order_id_ = 0;
  clock_ = 0;
  done_ = false;
  has_pending_ = false;

  for (int i = 0; i < config_.num_initial_customers; ++i) {
    CustomerId id = add_customer(spawn_customer(config_, world_rng_, 0.0));
    schedule_next_order(id);
  }
  push_event(world_rng_.exponential(config_.mean_signup_interval_regular), -1, EventType::kSignupRegular);
  push_event(world_rng_.exponential(config_.mean_signup_interval_bad), -1, EventType::kSignupBad);

  StepResult result;
  result.terminal = !advance();
  done_ = result.terminal;
  if (!result.terminal) {
    result.observation = pending_obs_;
    result.info.customer_id = pending_.customer_id;
    result.info.order_time = pending_.time;
    result.info.true_outcome = pending_.true_outcome;
  } else {
    result.observation = Vec::Zero(kObservationDim);
  }
  return result;
}

bool Environment::advance() {
  while (!events_.empty()) {
    Event ev = events_.top();
    if (ev.time > config_.sim_duration) return false;  // horizon reached
    events_.pop();
    clock_ = ev.time;
    switch (ev.type) {
      case EventType::kSignupRegular: {
        CustomerId id =
            add_customer(spawn_customer_of_kind(CustomerKind::kRegular, config_, world_rng_, clock_));
        schedule_next_order(id);
        push_event(clock_ + world_rng_.exponential(config_.mean_signup_interval_regular), -1,
                   EventType::kSignupRegular);
        break;
      }
      case EventType::kSignupBad: {
        CustomerKind kind = world_rng_.bernoulli(config_.ratio_sleeper_among_bad)
                                ? CustomerKind::kSleeperBadActor
                                : CustomerKind::kImmediateBadActor;
        CustomerId id = add_customer(spawn_customer_of_kind(kind, config_, world_rng_, clock_));
        schedule_next_order(id);
        push_event(clock_ + world_rng_.exponential(config_.mean_signup_interval_bad), -1,
                   EventType::kSignupBad);
        break;
      }
      case EventType::kOrderArrival: {
        Customer& c = customers_[static_cast<std::size_t>(ev.customer_id)];
        if (!c.can_order()) break;  // suspended or abandoned: no order emitted
        Rng& stream = customer_streams_[static_cast<std::size_t>(ev.customer_id)];
        pending_ = originate_order(c, inventory_, config_, stream, clock_);
        pending_.order_id = next_order_id_++;
        auto [pm, loc] = draw_risk_vars(pending_.true_outcome, config_.risk, stream);
        pending_obs_ = history_.compute_observation(pending_, pm, loc, clock_);
        has_pending_ = true;
        return true;
      }
    }
  }
  return false;
}

StepResult Environment::step(Action action) {
  if (done_) throw ContractViolation("step called on a terminal environment");
  if (!has_pending_) throw ContractViolation("step called with no pending order");

  Customer& c = customers_[static_cast<std::size_t>(pending_.customer_id)];
  Rng& stream = customer_streams_[static_cast<std::size_t>(pending_.customer_id)];
  ApplyResult applied = apply_action(pending_, action, c, ledger_, config_, stream);
  int category = inventory_.items[static_cast<std::size_t>(pending_.item_id)].category_id;
  history_.update(pending_, category, action, applied.inferred_outcome, applied.chargeback);

  StepResult result;
  result.reward = applied.reward;
  result.inferred_outcome = applied.inferred_outcome;
  if (applied.chargeback) result.info.chargeback_customer_id = pending_.customer_id;

  if (c.can_order()) schedule_next_order(pending_.customer_id);
  has_pending_ = false;

  result.terminal = !advance();
  done_ = result.terminal;
  if (!result.terminal) {
    result.observation = pending_obs_;
    result.info.customer_id = pending_.customer_id;
    result.info.order_time = pending_.time;
    result.info.true_outcome = pending_.true_outcome;
  } else {
    result.observation = Vec::Zero(kObservationDim);
  }
  return result;
}

const Order& Environment::pending_order() const {
  if (!has_pending_) throw ContractViolation("no pending order");
  return pending_;
}

}  // namespace simstore
