// Copyright 2026 The spacestate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "spacestate/kernels.hpp"

namespace spacestate::kernels::detail {

inline std::size_t block_count(std::size_t n) {
  return (n + kReductionBlock - 1) / kReductionBlock;
}

// Sequential sum of term(i) over block b.
template <class T, class Term>
T block_partial(std::size_t n, std::size_t b, Term &&term) {
  T acc{};
  const std::size_t end = std::min(n, (b + 1) * kReductionBlock);
  for (std::size_t i = b * kReductionBlock; i < end; ++i) acc += term(i);
  return acc;
}

template <class T>
T combine(const std::vector<T> &partials) {
  T acc{};
  for (const T &p : partials) acc += p;
  return acc;
}

inline std::size_t pick_bucket(const double *cdf, std::size_t n, double target) {
  std::size_t idx = static_cast<std::size_t>(std::upper_bound(cdf, cdf + n, target) - cdf);
  return idx < n ? idx : n - 1;
}

}  // namespace spacestate::kernels::detail
