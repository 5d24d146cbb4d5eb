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

#include <stdexcept>

#include "block_sum.hpp"
#include "spacestate/kernels.hpp"
#include "spacestate/rng.hpp"

namespace spacestate::kernels::serial {

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  const std::size_t n = a.size();
  std::vector<cplx> partials(detail::block_count(n));
  for (std::size_t blk = 0; blk < partials.size(); ++blk) {
    partials[blk] = detail::block_partial<cplx>(n, blk, [&](std::size_t i) { return std::conj(a[i]) * b[i]; });
  }
  return detail::combine(partials);
}

double norm_squared(std::span<const cplx> a) {
  const std::size_t n = a.size();
  std::vector<double> partials(detail::block_count(n));
  for (std::size_t blk = 0; blk < partials.size(); ++blk) {
    partials[blk] = detail::block_partial<double>(n, blk, [&](std::size_t i) { return std::norm(a[i]); });
  }
  return detail::combine(partials);
}

void matvec(std::span<const cplx> matrix, std::span<const cplx> in, std::span<cplx> out) {
  const std::size_t n = in.size();
  if (matrix.size() != n * n || out.size() != n) throw std::invalid_argument("matvec: shape mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc{};
    const cplx *row = matrix.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * in[j];
    out[i] = acc;
  }
}

void for_each(std::size_t n, const std::function<void(std::size_t)> &body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

void for_each_pair(std::size_t n, const std::function<void(std::size_t, std::size_t)> &body) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) body(i, j);
  }
}

void sample_histogram(std::span<const double> cdf, std::span<const int> label_of,
                      std::uint64_t samples, std::uint64_t seed, std::uint64_t stream,
                      std::span<std::uint64_t> counts) {
  if (cdf.empty() || cdf.size() != label_of.size()) throw std::invalid_argument("sample_histogram: bad cdf");
  RandomStream rng(seed, stream);
  const double total = cdf.back();
  for (std::uint64_t k = 0; k < samples; ++k) {
    std::size_t bucket = detail::pick_bucket(cdf.data(), cdf.size(), rng.uniform(k) * total);
    ++counts[label_of[bucket]];
  }
}

}  // namespace spacestate::kernels::serial
