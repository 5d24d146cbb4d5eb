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

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "spacestate/errors.hpp"

namespace spacestate::detail {

// Line-oriented cursor shared by the text formats. Blank lines and lines
// starting with '#' are skipped.
class LineReader {
 public:
  explicit LineReader(std::string_view text) {
    std::size_t start = 0;
    int number = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      ++number;
      std::string_view line = text.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty() && line.front() != '#') lines_.push_back({std::string(line), number});
      start = end + 1;
    }
  }

  bool done() const { return pos_ >= lines_.size(); }
  const std::string &peek() const { check(); return lines_[pos_].text; }
  const std::string &next() { check(); return lines_[pos_++].text; }
  int line_number() const { return pos_ < lines_.size() ? lines_[pos_].number : -1; }

  static std::vector<std::string> split(const std::string &line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
  }

  [[noreturn]] void fail(const std::string &what) const {
    int n = pos_ > 0 && pos_ - 1 < lines_.size() ? lines_[pos_ - 1].number : line_number();
    throw FormatError("line " + std::to_string(n) + ": " + what);
  }

 private:
  void check() const {
    if (done()) throw FormatError("unexpected end of input");
  }

  struct Line {
    std::string text;
    int number;
  };
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

}  // namespace spacestate::detail
