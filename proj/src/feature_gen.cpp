#include "simstore/feature_gen.hpp"

#include "simstore/common.hpp"
#include "simstore/sim_core.hpp"

namespace simstore {

const std::array<const char*, kObservationDim>& observation_field_names() {
  static const std::array<const char*, kObservationDim> names = {
      "customer_past_lifetime_num_orders",
      "customer_past_lifetime_dollars_spent",
      "customer_past_lifetime_num_unique_categories",
      "customer_past_lifetime_num_unique_asins",
      "customer_days_since_first_order",
      "customer_days_since_last_order",
      "customer_past_lifetime_num_chargeback_orders",
      "order_total_price",
      "item_past_lifetime_num_orders",
      "item_past_lifetime_num_unique_customers",
      "payment_method_risk",
      "location_risk",
  };
  return names;
}

std::pair<double, double> draw_risk_vars(int true_outcome, const RiskVarParams& params, Rng& rng) {
  const BetaParams& pm = true_outcome == 1 ? params.payment_fraud : params.payment_legit;
  const BetaParams& loc = true_outcome == 1 ? params.location_fraud : params.location_legit;
  double payment = rng.beta(pm.alpha, pm.beta);
  double location = rng.beta(loc.alpha, loc.beta);
  return {payment, location};
}

Vec HistoryStore::compute_observation(const Order& order, double payment_risk, double location_risk,
                                      Time now) const {
  Vec o = Vec::Zero(kObservationDim);
  if (const CustomerAggregates* c = customer(order.customer_id)) {
    o[kCustomerNumOrders] = c->num_orders;
    o[kCustomerDollarsSpent] = c->dollars_spent;
    o[kCustomerNumUniqueCategories] = static_cast<double>(c->categories.size());
    o[kCustomerNumUniqueAsins] = static_cast<double>(c->items.size());
    o[kCustomerDaysSinceFirstOrder] =
        c->num_orders > 0 ? now - c->first_order_time : kNoPriorOrderSentinel;
    o[kCustomerDaysSinceLastOrder] =
        c->num_orders > 0 ? now - c->last_order_time : kNoPriorOrderSentinel;
    o[kCustomerNumChargebackOrders] = c->num_chargebacks;
  } else {
    o[kCustomerDaysSinceFirstOrder] = kNoPriorOrderSentinel;
    o[kCustomerDaysSinceLastOrder] = kNoPriorOrderSentinel;
  }
  o[kOrderTotalPrice] = order.price;
  if (const ItemAggregates* it = item(order.item_id)) {
    o[kItemNumOrders] = it->num_orders;
    o[kItemNumUniqueCustomers] = static_cast<double>(it->customers.size());
  }
  o[kPaymentMethodRisk] = payment_risk;
  o[kLocationRisk] = location_risk;
  return o;
}

void HistoryStore::update(const Order& order, int category_id, Action action, int inferred_outcome,
                          bool chargeback) {
  (void)inferred_outcome;
  if (!seen_orders_.insert(order.order_id).second) {
    throw ContractViolation("history update applied twice for order " + std::to_string(order.order_id));
  }
  CustomerAggregates& c = customers_[order.customer_id];
  c.num_orders += 1;
  if (action == Action::kPass) c.dollars_spent += order.price;  // cancelled orders produce no spend
  c.categories.insert(category_id);
  c.items.insert(order.item_id);
  if (c.first_order_time < 0) c.first_order_time = order.time;
  c.last_order_time = order.time;
  if (chargeback) c.num_chargebacks += 1;

  ItemAggregates& it = items_[order.item_id];
  it.num_orders += 1;
  it.customers.insert(order.customer_id);
}

void HistoryStore::clear() {
  customers_.clear();
  items_.clear();
  seen_orders_.clear();
}

const HistoryStore::CustomerAggregates* HistoryStore::customer(CustomerId id) const {
  auto it = customers_.find(id);
  return it == customers_.end() ? nullptr : &it->second;
}

const HistoryStore::ItemAggregates* HistoryStore::item(int item_id) const {
  auto it = items_.find(item_id);
  return it == items_.end() ? nullptr : &it->second;
}

}  // namespace simstore
