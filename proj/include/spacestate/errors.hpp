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

#include <stdexcept>
#include <string>

namespace spacestate {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class ZeroState : public Error {
 public:
  ZeroState() : Error("wavefunctional has zero norm") {}
};

class NoChargedField : public Error {
 public:
  using Error::Error;
};

class UnknownLabel : public Error {
 public:
  explicit UnknownLabel(const std::string &label)
      : Error("unknown macro-label '" + label + "'") {}
};

class TruncationExceeded : public Error {
 public:
  using Error::Error;
};

class SupportEscape : public Error {
 public:
  using Error::Error;
};

class ZeroDensity : public Error {
 public:
  ZeroDensity() : Error("cannot split a cell of zero density") {}
  using Error::Error;
};

class DepthExceeded : public Error {
 public:
  using Error::Error;
};

class EmptySupport : public Error {
 public:
  using Error::Error;
};

}  // namespace spacestate
