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

#include <omp.h>

#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>

#include "block_sum.hpp"
#include "spacestate/kernels.hpp"
#include "spacestate/rng.hpp"

namespace spacestate::kernels {

int set_threads(int n) {
  if (n < 1) throw std::invalid_argument("thread count must be positive");
  int previous = omp_get_max_threads();
  omp_set_num_threads(n);
  return previous;
}

int threads() { return omp_get_max_threads(); }

namespace parallel {

namespace {

// Holds the first exception thrown inside a parallel region.
class ErrorSlot {
 public:
  template <typename F>
  void run(F &&f) {
    try {
      f();
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

}  // namespace

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  const std::size_t n = a.size();
  const auto blocks = static_cast<std::int64_t>(detail::block_count(n));
  std::vector<cplx> partials(blocks);
#pragma omp parallel for schedule(static)
  for (std::int64_t blk = 0; blk < blocks; ++blk) {
    partials[blk] = detail::block_partial<cplx>(n, blk, [&](std::size_t i) { return std::conj(a[i]) * b[i]; });
  }
  return detail::combine(partials);
}

double norm_squared(std::span<const cplx> a) {
  const std::size_t n = a.size();
  const auto blocks = static_cast<std::int64_t>(detail::block_count(n));
  std::vector<double> partials(blocks);
#pragma omp parallel for schedule(static)
  for (std::int64_t blk = 0; blk < blocks; ++blk) {
    partials[blk] = detail::block_partial<double>(n, blk, [&](std::size_t i) { return std::norm(a[i]); });
  }
  return detail::combine(partials);
}

void matvec(std::span<const cplx> matrix, std::span<const cplx> in, std::span<cplx> out) {
  const std::size_t n = in.size();
  if (matrix.size() != n * n || out.size() != n) throw std::invalid_argument("matvec: shape mismatch");
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (n >= 64)
  for (std::int64_t i = 0; i < rows; ++i) {
    cplx acc{};
    const cplx *row = matrix.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * in[j];
    out[i] = acc;
  }
}

void for_each(std::size_t n, const std::function<void(std::size_t)> &body) {
  const auto count = static_cast<std::int64_t>(n);
  ErrorSlot slot;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) slot.run([&] { body(static_cast<std::size_t>(i)); });
  slot.rethrow();
}

void for_each_pair(std::size_t n, const std::function<void(std::size_t, std::size_t)> &body) {
  const auto count = static_cast<std::int64_t>(n);
  ErrorSlot slot;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    slot.run([&] {
      for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) body(static_cast<std::size_t>(i), j);
    });
  }
  slot.rethrow();
}

void sample_histogram(std::span<const double> cdf, std::span<const int> label_of,
                      std::uint64_t samples, std::uint64_t seed, std::uint64_t stream,
                      std::span<std::uint64_t> counts) {
  if (cdf.empty() || cdf.size() != label_of.size()) throw std::invalid_argument("sample_histogram: bad cdf");
  RandomStream rng(seed, stream);
  const double total = cdf.back();
  const std::size_t labels = counts.size();
  const auto draws = static_cast<std::int64_t>(samples);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(labels, 0);
#pragma omp for schedule(static)
    for (std::int64_t k = 0; k < draws; ++k) {
      std::size_t bucket = detail::pick_bucket(cdf.data(), cdf.size(),
                                                rng.uniform(static_cast<std::uint64_t>(k)) * total);
      ++local[label_of[bucket]];
    }
#pragma omp critical
    for (std::size_t l = 0; l < labels; ++l) counts[l] += local[l];
  }
}

}  // namespace parallel
}  // namespace spacestate::kernels
