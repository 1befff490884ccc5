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

#include <atomic>
#include <stdexcept>

#include "holoqed/kernels.hpp"

namespace holoqed::kernels {

namespace {

Backend detect() noexcept { return cpu_supports(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar; }

std::atomic<Backend>& current() noexcept {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

bool cpu_supports(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(HOLOQED_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return avx2_table() != nullptr && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

void select(Backend backend) {
  if (!cpu_supports(backend)) {
    throw std::invalid_argument("kernel backend '" + std::string(name(backend)) + "' is not available");
  }
  current().store(backend);
}

Backend active_backend() noexcept { return current().load(); }

const KernelTable& active() noexcept {
  if (current().load(std::memory_order_relaxed) == Backend::Avx2) return *avx2_table();
  return scalar_table();
}

std::string_view name(Backend backend) noexcept {
  return backend == Backend::Avx2 ? "avx2" : "scalar";
}

}  // namespace holoqed::kernels
