#pragma once

#include <stdexcept>
#include <string>

namespace simstore {

// Bad or inconsistent configuration (files, hyperparameters, distribution params).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or mismatched data (dataset files, checkpoints, schemas).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// API misuse: a precondition the caller is responsible for was violated.
struct ContractViolation : std::logic_error {
  explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

// Errors raised while a simulation is running (e.g. empty inventory).
struct SimulationError : std::runtime_error {
  explicit SimulationError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace simstore
