#pragma once

#include <array>
#include <unordered_map>
#include <unordered_set>

#include "simstore/config.hpp"
#include "simstore/rng.hpp"
#include "simstore/types.hpp"

namespace simstore {

struct Order;  // sim_core.hpp

inline constexpr int kObservationDim = 12;

// Risk variables computed at evaluation time, in fixed column order. This
// order also defines the dataset file layout.
enum ObservationField : int {
  kCustomerNumOrders = 0,
  kCustomerDollarsSpent = 1,
  kCustomerNumUniqueCategories = 2,
  kCustomerNumUniqueAsins = 3,
  kCustomerDaysSinceFirstOrder = 4,
  kCustomerDaysSinceLastOrder = 5,
  kCustomerNumChargebackOrders = 6,
  kOrderTotalPrice = 7,
  kItemNumOrders = 8,
  kItemNumUniqueCustomers = 9,
  kPaymentMethodRisk = 10,
  kLocationRisk = 11,
};

const std::array<const char*, kObservationDim>& observation_field_names();

// Day fields use -1 when the customer has no prior evaluated order.
inline constexpr double kNoPriorOrderSentinel = -1.0;

// Independent Beta draws conditioned on the true intent of the order.
std::pair<double, double> draw_risk_vars(int true_outcome, const RiskVarParams& params, Rng& rng);

// Rolling per-customer and per-item aggregates over evaluated orders.
// "Past lifetime" always excludes the order under evaluation.
class HistoryStore {
 public:
  Vec compute_observation(const Order& order, double payment_risk, double location_risk, Time now) const;

  // Folds an evaluated order into the aggregates. Dollars are counted only
  // for passed orders; chargebacks only when the flag is set.
  void update(const Order& order, int category_id, Action action, int inferred_outcome, bool chargeback);

  void clear();

  struct CustomerAggregates {
    int num_orders = 0;
    double dollars_spent = 0;
    std::unordered_set<int> categories;
    std::unordered_set<int> items;
    Time first_order_time = -1;
    Time last_order_time = -1;
    int num_chargebacks = 0;
  };

  struct ItemAggregates {
    int num_orders = 0;
    std::unordered_set<CustomerId> customers;
  };

  const CustomerAggregates* customer(CustomerId id) const;
  const ItemAggregates* item(int item_id) const;

 private:
  std::unordered_map<CustomerId, CustomerAggregates> customers_;
  std::unordered_map<int, ItemAggregates> items_;
  std::unordered_set<OrderId> seen_orders_;
};

}  // namespace simstore
