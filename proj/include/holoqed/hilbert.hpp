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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace holoqed {

enum class FactorKind { Transmon, Fock, Dressed, Abstract };

struct Factor {
  std::string label;
  std::size_t dimension = 1;
  FactorKind kind = FactorKind::Abstract;

  bool operator==(const Factor&) const = default;
};

/// Ordered tensor-product structure. The first factor is the most significant
/// index in the flattened basis (kron ordering).
class HilbertSpace {
 public:
  HilbertSpace();
  explicit HilbertSpace(std::vector<Factor> factors);

  static HilbertSpace single(std::string label, std::size_t dimension,
                             FactorKind kind = FactorKind::Abstract);

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<Factor>& factors() const noexcept { return *factors_; }
  std::size_t size() const noexcept { return factors_->size(); }

  bool has(std::string_view label) const noexcept;
  /// Throws SpaceMismatch for an unknown label.
  std::size_t index_of(std::string_view label) const;
  const Factor& factor(std::string_view label) const;
  /// Index of the unique factor of the given kind; throws if absent or ambiguous.
  std::size_t unique_index_of(FactorKind kind) const;

  /// Flattened index of a product basis state, one level per factor.
  std::size_t flat_index(const std::vector<std::size_t>& levels) const;
  /// Per-factor levels of a flattened index.
  std::vector<std::size_t> levels_of(std::size_t flat) const;

  std::string describe() const;

  bool operator==(const HilbertSpace& other) const;
  bool operator!=(const HilbertSpace& other) const { return !(*this == other); }

 private:
  std::shared_ptr<const std::vector<Factor>> factors_;
  std::size_t dimension_ = 1;
};

}  // namespace holoqed
