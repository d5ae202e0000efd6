#pragma once

#include "sicnn/activation.hpp"
#include "sicnn/network.hpp"
#include "sicnn/schedule.hpp"

namespace sicnn {

/// Network, argument schedule and activation functional: everything that defines the equation.
struct Model {
  NetworkSpec network;
  GammaSchedule schedule;
  Activation activation;
  DeclaredSpacing declared;

  [[nodiscard]] ScheduleBounds bounds() const { return schedule_bounds(schedule, declared); }
  [[nodiscard]] DerivedConstants constants() const {
    return derived_constants(network, bounds(), activation.M(), activation.L());
  }
  [[nodiscard]] ConditionReport conditions() const {
    return check_conditions(network, bounds(), activation.M(), activation.L());
  }

  /// The worked 3x3 example: network, schedule over p in [-range, range], activation.
  static Model example6(Index range = 10000);
};

} // namespace sicnn
