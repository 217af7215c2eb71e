#pragma once

#include <stdexcept>
#include <string>

namespace c2ucb {

struct NonSymmetric : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidContexts : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptySuperArm : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SuperArmTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyLedger : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NegativeEigenvalue : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DriftExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BadK : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BadRound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace c2ucb
