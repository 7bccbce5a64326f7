#include "simstore/inventory.hpp"

#include <algorithm>
#include <cmath>

#include "simstore/common.hpp"

namespace simstore {

std::vector<Item> init_inventory(const SimConfig& config, Rng& rng) {
  if (config.price_mean <= 0 || config.price_sd <= 0) {
    throw ConfigError("item price mean and standard deviation must be positive");
  }
  // Solve the log-normal shape from the target moments:
  //   sigma^2 = ln(1 + sd^2/mean^2),  mu = ln(mean) - sigma^2/2.
  double ratio = config.price_sd / config.price_mean;
  double sigma2 = std::log1p(ratio * ratio);
  double mu = std::log(config.price_mean) - 0.5 * sigma2;
  double sigma = std::sqrt(sigma2);

  std::vector<Item> items;
  items.reserve(static_cast<std::size_t>(std::max(config.num_items, 0)));
  for (int i = 0; i < config.num_items; ++i) {
    Item item;
    item.item_id = i;
    item.category_id = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(config.num_categories)));
    item.price = rng.log_normal(mu, sigma);
    items.push_back(item);
  }
  return items;
}

std::vector<int> price_band(const std::vector<Item>& items, double pct, bool expensive) {
  if (items.empty()) return {};
  std::vector<int> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (items[a].price != items[b].price) return items[a].price < items[b].price;
    return items[a].item_id < items[b].item_id;
  });
  auto count = static_cast<std::size_t>(
      std::ceil(static_cast<double>(items.size()) * pct / 100.0));
  count = std::clamp<std::size_t>(count, 1, items.size());
  std::vector<int> band;
  band.reserve(count);
  if (expensive) {
    for (std::size_t i = items.size() - count; i < items.size(); ++i) band.push_back(items[order[i]].item_id);
  } else {
    for (std::size_t i = 0; i < count; ++i) band.push_back(items[order[i]].item_id);
  }
  return band;
}

Inventory build_inventory(const SimConfig& config, Rng& rng) {
  Inventory inv;
  inv.items = init_inventory(config, rng);
  inv.expensive_band = price_band(inv.items, config.attack_target_percentile, /*expensive=*/true);
  inv.cheap_band = price_band(inv.items, config.sleeper_cheap_percentile, /*expensive=*/false);
  return inv;
}

}  // namespace simstore
