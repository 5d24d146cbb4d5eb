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

#include "spacestate/wavefunctional.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "line_reader.hpp"
#include "spacestate/decimal.hpp"
#include "spacestate/errors.hpp"
#include "spacestate/kernels.hpp"
#include "spacestate/ssg1.hpp"

namespace spacestate {

BasisKey basis_key(const SpaceState &s) { return {canonicalize(s), s.cell_index}; }

void Wavefunctional::add(const SpaceState &s, Complex amplitude) {
  CanonicalForm form = canonical_form(s);
  add_canonical({form.key, s.cell_index}, form.state, amplitude);
}

void Wavefunctional::add_canonical(const BasisKey &key, const SpaceState &canonical, Complex amplitude) {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    if (std::abs(amplitude) < kPruneTolerance) return;
    entries_.emplace(key, WaveEntry{canonical, amplitude});
    return;
  }
  it->second.amplitude += amplitude;
  if (std::abs(it->second.amplitude) < kPruneTolerance) entries_.erase(it);
}

Complex Wavefunctional::amplitude(const BasisKey &key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? Complex{} : it->second.amplitude;
}

double Wavefunctional::norm_squared() const {
  std::vector<Complex> amps;
  amps.reserve(entries_.size());
  for (const auto &[key, e] : entries_) amps.push_back(e.amplitude);
  return kernels::norm_squared(amps);
}

double Wavefunctional::norm() const { return std::sqrt(norm_squared()); }

Complex inner_product(const Wavefunctional &a, const Wavefunctional &b) {
  std::vector<Complex> left, right;
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  while (ia != a.entries().end() && ib != b.entries().end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      left.push_back(ia->second.amplitude);
      right.push_back(ib->second.amplitude);
      ++ia;
      ++ib;
    }
  }
  return kernels::dot(left, right);
}

Wavefunctional scale(const Wavefunctional &psi, Complex factor) {
  Wavefunctional out(psi.epoch());
  for (const auto &[key, e] : psi.entries()) out.add_canonical(key, e.state, e.amplitude * factor);
  return out;
}

Wavefunctional normalize(const Wavefunctional &psi) {
  const double n = psi.norm();
  if (n == 0.0) throw ZeroState();
  return scale(psi, Complex(1.0 / n));
}

Wavefunctional rotate_global_phase(const Wavefunctional &psi, double theta) {
  return scale(psi, std::polar(1.0, theta));
}

Wavefunctional shift_gauge(const Wavefunctional &psi, double theta) {
  const Phase shift = Phase::from_radians(theta);
  Wavefunctional out(psi.epoch());
  for (const auto &[key, e] : psi.entries()) {
    if (!e.state.has_charged_vertex()) throw NoChargedField("basis state has no charged vertex");
    out.add(shift_gauge(e.state, shift), e.amplitude);
  }
  return out;
}

Wavefunctional project(const Wavefunctional &psi, const MacroPartition &partition, const MacroLabel &alpha) {
  if (!partition.has_label(alpha)) throw UnknownLabel(alpha);
  Wavefunctional out(psi.epoch());
  for (const auto &[key, e] : psi.entries()) {
    if (partition.classify(e.state) == alpha) out.add_canonical(key, e.state, e.amplitude);
  }
  return out;
}

double macro_weight(const Wavefunctional &psi, const MacroPartition &partition, const MacroLabel &alpha) {
  Wavefunctional p = project(psi, partition, alpha);
  return inner_product(p, p).real();
}

double DensitizedView::total_weight() const {
  std::vector<Complex> r;
  r.reserve(entries.size());
  for (const auto &[key, e] : entries) r.emplace_back(e.density);
  return kernels::norm_squared(r);
}

double DensitizedView::restricted_weight(const MacroPartition &partition, const MacroLabel &alpha) const {
  if (!partition.has_label(alpha)) throw UnknownLabel(alpha);
  std::vector<Complex> r;
  for (const auto &[key, e] : entries) {
    if (partition.classify(e.state) == alpha) r.emplace_back(e.density);
  }
  return kernels::norm_squared(r);
}

Wavefunctional DensitizedView::reconstruct() const {
  Wavefunctional out(epoch);
  for (const auto &[key, e] : entries) {
    SpaceState original = shift_gauge(e.state, -Phase::from_radians(e.gauge_log));
    out.add_canonical(key, canonical_form(original).state, std::polar(e.density, e.gauge_log));
  }
  return out;
}

DensitizedView gauge_absorb(const Wavefunctional &psi) {
  DensitizedView view;
  view.epoch = psi.epoch();
  for (const auto &[key, e] : psi.entries()) {
    const double r = std::abs(e.amplitude);
    if (r == 0.0) continue;
    if (!e.state.has_charged_vertex()) {
      throw NoChargedField("basis state cannot absorb a phase: no charged vertex");
    }
    double theta = std::arg(e.amplitude);
    if (theta < 0) theta += 2 * std::numbers::pi;
    if (theta >= 2 * std::numbers::pi) theta = 0;
    view.entries.emplace(key, DensityEntry{shift_gauge(e.state, Phase::from_radians(theta)), r, theta});
  }
  return view;
}

std::string write_wfn1(const Wavefunctional &psi) {
  std::string out = "WFN1\nepoch " + std::to_string(psi.epoch()) + "\nentries " +
                    std::to_string(psi.size()) + "\n";
  for (const auto &[key, e] : psi.entries()) {
    out += "entry " + key.graph.hex() + " " + key.cell.to_string() + " " + format_double(e.amplitude.real()) +
           " " + format_double(e.amplitude.imag()) + "\n";
    out += write_ssg1(e.state);
  }
  return out;
}

Wavefunctional read_wfn1(std::string_view text) {
  detail::LineReader in(text);
  if (in.next() != "WFN1") in.fail("expected WFN1 header");
  auto epoch_tok = detail::LineReader::split(in.next());
  if (epoch_tok.size() != 2 || epoch_tok[0] != "epoch") in.fail("expected 'epoch <n>'");
  auto count_tok = detail::LineReader::split(in.next());
  if (count_tok.size() != 2 || count_tok[0] != "entries") in.fail("expected 'entries <count>'");
  Wavefunctional psi;
  std::size_t count = 0;
  try {
    psi.set_epoch(std::stoll(epoch_tok[1]));
    count = std::stoull(count_tok[1]);
  } catch (const std::exception &) {
    in.fail("bad epoch or entry count");
  }
  for (std::size_t i = 0; i < count; ++i) {
    auto tok = detail::LineReader::split(in.next());
    if (tok.size() != 5 || tok[0] != "entry") in.fail("expected entry record");
    BasisKey key;
    Complex amp;
    try {
      key = {CanonicalKey::from_hex(tok[1]), CellPath::parse(tok[2])};
      amp = {parse_double(tok[3]), parse_double(tok[4])};
    } catch (const Error &err) {
      in.fail(err.what());
    }
    SpaceState state = read_ssg1_block(in);
    state.cell_index = key.cell;
    CanonicalForm form = canonical_form(state);
    if (form.key != key.graph) in.fail("entry key does not match its graph");
    if (psi.contains(key)) in.fail("duplicate entry");
    psi.add_canonical(key, form.state, amp);
  }
  if (!in.done()) in.fail("trailing content after WFN1 entries");
  return psi;
}

}  // namespace spacestate
