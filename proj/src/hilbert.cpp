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

#include "holoqed/hilbert.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "holoqed/error.hpp"

namespace holoqed {

HilbertSpace::HilbertSpace() : factors_(std::make_shared<const std::vector<Factor>>()) {}

HilbertSpace::HilbertSpace(std::vector<Factor> factors) {
  std::set<std::string> seen;
  std::size_t dim = 1;
  for (const auto& f : factors) {
    if (f.dimension == 0) {
      throw InvalidDimension("factor '" + f.label + "' has dimension 0");
    }
    if (!seen.insert(f.label).second) {
      throw SpaceMismatch("duplicate factor label '" + f.label + "'");
    }
    dim *= f.dimension;
  }
  factors_ = std::make_shared<const std::vector<Factor>>(std::move(factors));
  dimension_ = dim;
}

HilbertSpace HilbertSpace::single(std::string label, std::size_t dimension, FactorKind kind) {
  return HilbertSpace({Factor{std::move(label), dimension, kind}});
}

bool HilbertSpace::has(std::string_view label) const noexcept {
  return std::any_of(factors_->begin(), factors_->end(),
                     [&](const Factor& f) { return f.label == label; });
}

std::size_t HilbertSpace::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < factors_->size(); ++i) {
    if ((*factors_)[i].label == label) return i;
  }
  throw SpaceMismatch("no factor labelled '" + std::string(label) + "' in " + describe());
}

const Factor& HilbertSpace::factor(std::string_view label) const {
  return (*factors_)[index_of(label)];
}

std::size_t HilbertSpace::unique_index_of(FactorKind kind) const {
  std::size_t found = factors_->size();
  for (std::size_t i = 0; i < factors_->size(); ++i) {
    if ((*factors_)[i].kind != kind) continue;
    if (found != factors_->size()) {
      throw SpaceMismatch("more than one factor of the requested kind in " + describe());
    }
    found = i;
  }
  if (found == factors_->size()) {
    throw SpaceMismatch("no factor of the requested kind in " + describe());
  }
  return found;
}

std::size_t HilbertSpace::flat_index(const std::vector<std::size_t>& levels) const {
  if (levels.size() != factors_->size()) {
    throw SpaceMismatch("level list length does not match factor count");
  }
  std::size_t idx = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto d = (*factors_)[i].dimension;
    if (levels[i] >= d) throw InvalidDimension("level out of range for factor '" + (*factors_)[i].label + "'");
    idx = idx * d + levels[i];
  }
  return idx;
}

std::vector<std::size_t> HilbertSpace::levels_of(std::size_t flat) const {
  std::vector<std::size_t> levels(factors_->size());
  for (std::size_t i = factors_->size(); i-- > 0;) {
    const auto d = (*factors_)[i].dimension;
    levels[i] = flat % d;
    flat /= d;
  }
  return levels;
}

std::string HilbertSpace::describe() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < factors_->size(); ++i) {
    if (i) os << " x ";
    os << (*factors_)[i].label << ':' << (*factors_)[i].dimension;
  }
  os << ')';
  return os.str();
}

bool HilbertSpace::operator==(const HilbertSpace& other) const {
  return factors_ == other.factors_ || *factors_ == *other.factors_;
}

}  // namespace holoqed
