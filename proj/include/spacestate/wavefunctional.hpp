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
 * Sparse wavefunctional over space-state basis elements, its densitized
 * (gauge-absorbed) view, and the WFN1 state dump.
 */

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "spacestate/canonical.hpp"
#include "spacestate/macrostates.hpp"
#include "spacestate/space_state.hpp"

namespace spacestate {

using Complex = std::complex<double>;

/// Identity of a basis element: canonical graph key plus sub-cell path.
struct BasisKey {
  CanonicalKey graph;
  CellPath cell;

  auto operator<=>(const BasisKey &) const = default;
};

BasisKey basis_key(const SpaceState &s);

struct WaveEntry {
  SpaceState state;  ///< canonical representative
  Complex amplitude;
};

class Wavefunctional {
 public:
  /// Entries with |amplitude| below this are dropped after every mutation.
  static constexpr double kPruneTolerance = 1e-14;

  Wavefunctional() = default;
  explicit Wavefunctional(std::int64_t epoch) : epoch_(epoch) {}

  /// Adds amplitude to the basis element of s (canonicalizing it first).
  void add(const SpaceState &s, Complex amplitude);
  /// As add(), for a state already in canonical form under key.
  void add_canonical(const BasisKey &key, const SpaceState &canonical, Complex amplitude);

  const std::map<BasisKey, WaveEntry> &entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  Complex amplitude(const BasisKey &key) const;
  bool contains(const BasisKey &key) const { return entries_.count(key) != 0; }

  double norm_squared() const;
  double norm() const;

  std::int64_t epoch() const { return epoch_; }
  void set_epoch(std::int64_t epoch) { epoch_ = epoch; }

 private:
  std::map<BasisKey, WaveEntry> entries_;
  std::int64_t epoch_ = 0;
};

/// sum over shared keys, in key order, of conj(a) * b.
Complex inner_product(const Wavefunctional &a, const Wavefunctional &b);

/// Throws ZeroState for the zero vector.
Wavefunctional normalize(const Wavefunctional &psi);
Wavefunctional scale(const Wavefunctional &psi, Complex factor);

/// Multiplies every amplitude by e^{i theta}.
Wavefunctional rotate_global_phase(const Wavefunctional &psi, double theta);
/// Replaces every basis state by its gauge-rotated copy, amplitudes unchanged.
/// Throws NoChargedField if some state has no charged vertex.
Wavefunctional shift_gauge(const Wavefunctional &psi, double theta);

/// Keeps the entries labeled alpha. Throws UnknownLabel.
Wavefunctional project(const Wavefunctional &psi, const MacroPartition &partition,
                       const MacroLabel &alpha);
/// <psi|P_alpha|psi>.
double macro_weight(const Wavefunctional &psi, const MacroPartition &partition,
                    const MacroLabel &alpha);

struct DensityEntry {
  SpaceState state;     ///< field configuration with the phase absorbed
  double density = 0;   ///< r >= 0
  double gauge_log = 0; ///< absorbed phase theta in [0, 2 pi)
};

/**
 * The wavefunctional written with real non-negative coefficients: every
 * amplitude r e^{i theta} becomes density r on the state whose charged phases
 * were advanced by theta. Keys are those of the source entries.
 */
class DensitizedView {
 public:
  std::map<BasisKey, DensityEntry> entries;
  std::int64_t epoch = 0;

  /// sum r^2
  double total_weight() const;
  /// Squared norm of the uniformized state restricted to one macrostate.
  double restricted_weight(const MacroPartition &partition, const MacroLabel &alpha) const;
  /// Undoes the absorption: amplitude r e^{i theta} on the un-rotated state.
  Wavefunctional reconstruct() const;
};

/// Throws NoChargedField if a state with r > 0 cannot carry a phase.
DensitizedView gauge_absorb(const Wavefunctional &psi);

/**
 * WFN1 dump:
 *
 *     WFN1
 *     epoch <n>
 *     entries <count>
 *     entry <key-hex> <cell bits or -> <re> <im>
 *     <SSG1 block of the canonical state>
 *     ...
 *
 * Entries appear in key order; decimals are shortest round-trip.
 */
std::string write_wfn1(const Wavefunctional &psi);
Wavefunctional read_wfn1(std::string_view text);

}  // namespace spacestate
