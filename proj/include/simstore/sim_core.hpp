#pragma once

#include <optional>
#include <queue>
#include <vector>

#include "simstore/config.hpp"
#include "simstore/customer.hpp"
#include "simstore/feature_gen.hpp"
#include "simstore/inventory.hpp"
#include "simstore/rng.hpp"
#include "simstore/types.hpp"

namespace simstore {

struct Order {
  OrderId order_id = -1;
  CustomerId customer_id = -1;
  int item_id = -1;
  double price = 0;
  Time time = 0;
  int true_outcome = 0;  // y, never exposed through observations
};

struct Ledger {
  double revenue = 0;
  double chargeback_loss = 0;
  double net_revenue() const { return revenue - chargeback_loss; }
};

// Diagnostics channel: true outcomes ride here, never in observations.
struct StepInfo {
  // The pending order the returned observation describes.
  CustomerId customer_id = -1;
  Time order_time = 0;
  int true_outcome = 0;
  // Customer whose just-applied order resulted in a chargeback, or -1.
  CustomerId chargeback_customer_id = -1;
};

struct StepResult {
  Vec observation;       // zero vector when terminal
  double reward = 0;     // reward of the action just applied (0 after reset)
  int inferred_outcome = 0;
  bool terminal = false;
  StepInfo info;
};

struct ApplyResult {
  double reward = 0;
  int inferred_outcome = 0;
  bool chargeback = false;
};

// Picks an item for the customer's current phase, draws the fraud intent and
// advances the customer's order counter.
Order originate_order(Customer& customer, const Inventory& inventory, const SimConfig& config,
                      Rng& rng, Time now);

// Settles one order: pass books revenue or a chargeback; fraud cancels the
// order, suspends the account and, for regular customers, draws reinstatement.
ApplyResult apply_action(const Order& order, Action action, Customer& customer, Ledger& ledger,
                         const SimConfig& config, Rng& rng);

// Discrete-event store simulation with a step/reset interface. One instance
// is single-threaded; independent instances may run in parallel.
class Environment {
 public:
  Environment(SimConfig config, std::uint64_t seed);

  // Rebuilds the world from the seed and advances to the first pending order.
  StepResult reset();

  // Applies the action to the pending order and advances to the next one.
  StepResult step(Action action);

  bool done() const { return done_; }
  Time clock() const { return clock_; }
  const Ledger& ledger() const { return ledger_; }
  const SimConfig& config() const { return config_; }
  const Inventory& inventory() const { return inventory_; }
  const HistoryStore& history() const { return history_; }
  const Order& pending_order() const;
  const Customer& customer(CustomerId id) const { return customers_.at(static_cast<std::size_t>(id)); }
  std::size_t num_customers() const { return customers_.size(); }

 private:
  enum class EventType { kOrderArrival, kSignupRegular, kSignupBad };

  struct Event {
    Time time = 0;
    CustomerId customer_id = -1;  // -1 for signup events
    std::uint64_t seq = 0;
    EventType type = EventType::kOrderArrival;
  };

  struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.customer_id != b.customer_id) return a.customer_id > b.customer_id;
      return a.seq > b.seq;
    }
  };

  void push_event(Time time, CustomerId customer_id, EventType type);
  CustomerId add_customer(Customer c);
  void schedule_next_order(CustomerId id);
  // Advances the clock to the next pending order; false when the horizon is
  // reached or the queue runs dry.
  bool advance();

  SimConfig config_;
  std::uint64_t seed_;

  Inventory inventory_;
  std::vector<Customer> customers_;
  std::vector<Rng> customer_streams_;  // per-customer randomness, keeps matched
                                       // seeds aligned across policies
  Rng world_rng_;                      // inventory, spawning, signup processes
  HistoryStore history_;
  Ledger ledger_;

  std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
  std::uint64_t event_seq_ = 0;
  OrderId next_order_id_ = 0;

  Time clock_ = 0;
  bool done_ = true;
  bool has_pending_ = false;
  Order pending_;
  Vec pending_obs_;
};

}  // namespace simstore
