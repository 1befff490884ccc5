// Copyright 2026 The holoqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace holoqed {

struct StepControl {
  double rtol = 1e-10;
  double atol = 1e-12;
  /// First trial step (ns). Must resolve the fastest drive period.
  double initial_step = 0.01;
  double max_step = 0.0;  // 0 → unbounded
  std::size_t max_steps = 50'000'000;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
  double smallest_step = 0.0;
  double largest_step = 0.0;
};

/// Adaptive explicit Runge–Kutta of order 8 with embedded 5th/3rd-order error
/// estimate (Dormand–Prince 8(5,3), Hairer–Nørsett–Wanner step control) over a
/// flat real state vector. Complex states are integrated as interleaved
/// (re, im) pairs.
class Dop853 {
 public:
  using Rhs = std::function<void(double t, const double* y, double* dydt)>;
  using StopCallback = std::function<void(std::size_t stop_index, double t, const double* y)>;

  Dop853(std::size_t n, Rhs rhs, StepControl control);

  /// Advances `y` from t0 through each time in `stops` (strictly ascending,
  /// all ≥ t0), calling `on_stop` when a stop is reached exactly. Throws
  /// PropagationError on step-size underflow or when max_steps is exceeded.
  void integrate(double t0, std::span<double> y, std::span<const double> stops, const StopCallback& on_stop);

  const IntegratorStats& stats() const noexcept { return stats_; }
  std::size_t size() const noexcept { return n_; }

 private:
  double attempt_step(double t, double h, const double* y, double* y_new);

  std::size_t n_;
  Rhs rhs_;
  StepControl control_;
  IntegratorStats stats_;
  std::vector<std::vector<double>> k_;  // 12 stage derivatives
  std::vector<double> work_;
  std::vector<double> increment_;
};

}  // namespace holoqed
