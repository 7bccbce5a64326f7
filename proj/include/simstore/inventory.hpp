#pragma once

#include <vector>

#include "simstore/config.hpp"
#include "simstore/rng.hpp"
#include "simstore/types.hpp"

namespace simstore {

struct Item {
  int item_id = 0;
  int category_id = 0;
  double price = 0.0;
};

// Product listing plus the price bands bad actors target.
struct Inventory {
  std::vector<Item> items;
  std::vector<int> expensive_band;  // item ids in the top price percentile band
  std::vector<int> cheap_band;      // item ids in the bottom band
};

// Prices are log-normal with the configured (mean, sd) as the moments of the
// resulting distribution; categories are assigned uniformly.
std::vector<Item> init_inventory(const SimConfig& config, Rng& rng);

Inventory build_inventory(const SimConfig& config, Rng& rng);

// Band of the `pct`% most expensive (or cheapest) items, ties broken by id.
std::vector<int> price_band(const std::vector<Item>& items, double pct, bool expensive);

}  // namespace simstore
