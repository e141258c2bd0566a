// Copyright 2026 The otm-sdp Authors
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

namespace otm {

/// Shapes or lengths that do not line up.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

class UnknownRegisterError : public DimensionError {
 public:
  explicit UnknownRegisterError(const std::string& name)
      : DimensionError("unknown register '" + name + "'") {}
};

class NotHermitianError : public std::invalid_argument {
 public:
  NotHermitianError() : std::invalid_argument("matrix is not Hermitian") {}
};

/// A parameter outside its documented domain (n = 0, infeasible deltas, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

/// Requested instance exceeds an enumeration or solver cap.
class SizeCapError : public std::runtime_error {
 public:
  explicit SizeCapError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace otm
