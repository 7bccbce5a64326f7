#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace simstore {

using Scalar = double;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using CustomerId = std::int64_t;
using OrderId = std::int64_t;

// Timestamps and durations are in fractional days since simulation start.
using Time = double;

enum class Action : int { kPass = 0, kFraud = 1 };

inline int action_index(Action a) { return static_cast<int>(a); }

inline Action action_from_index(int i) {
  return i == 0 ? Action::kPass : Action::kFraud;
}

inline constexpr int kNumActions = 2;

constexpr Time days(double d) { return d; }
constexpr Time hours(double h) { return h / 24.0; }
constexpr Time minutes(double m) { return m / (24.0 * 60.0); }

}  // namespace simstore
