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

/**
 * @file
 * Data-parallel inner loops. Every kernel has a serial reference and an
 * OpenMP version with bit-identical results: sums run over fixed-size blocks
 * whose partials are combined in block order, independent of thread count.
 * The unqualified names dispatch to the OpenMP versions.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace spacestate::kernels {

using cplx = std::complex<double>;

/// Block length of the deterministic reductions.
inline constexpr std::size_t kReductionBlock = 256;

/// Sets the OpenMP worker count (n >= 1); returns the previous value.
int set_threads(int n);
int threads();

namespace serial {

/// sum_i conj(a[i]) * b[i]
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
double norm_squared(std::span<const cplx> a);
/// out = M * in for a row-major n x n matrix.
void matvec(std::span<const cplx> matrix, std::span<const cplx> in, std::span<cplx> out);
/// Calls body(i) for every i in [0, n).
void for_each(std::size_t n, const std::function<void(std::size_t)> &body);
/// Calls body(i, j) for every 0 <= i < j < n.
void for_each_pair(std::size_t n, const std::function<void(std::size_t, std::size_t)> &body);
/**
 * Inverse-CDF sampling: draw k uses uniform(k) of RandomStream(seed, stream)
 * scaled by cdf.back(), picks the first bucket whose cdf exceeds it, and adds
 * one to counts[label_of[bucket]].
 */
void sample_histogram(std::span<const double> cdf, std::span<const int> label_of,
                      std::uint64_t samples, std::uint64_t seed, std::uint64_t stream,
                      std::span<std::uint64_t> counts);

}  // namespace serial

namespace parallel {

cplx dot(std::span<const cplx> a, std::span<const cplx> b);
double norm_squared(std::span<const cplx> a);
void matvec(std::span<const cplx> matrix, std::span<const cplx> in, std::span<cplx> out);
void for_each(std::size_t n, const std::function<void(std::size_t)> &body);
void for_each_pair(std::size_t n, const std::function<void(std::size_t, std::size_t)> &body);
void sample_histogram(std::span<const double> cdf, std::span<const int> label_of,
                      std::uint64_t samples, std::uint64_t seed, std::uint64_t stream,
                      std::span<std::uint64_t> counts);

}  // namespace parallel

using parallel::dot;
using parallel::for_each;
using parallel::for_each_pair;
using parallel::matvec;
using parallel::norm_squared;
using parallel::sample_histogram;

}  // namespace spacestate::kernels
