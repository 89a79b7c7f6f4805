/*
 * Copyright 2026 The overlap-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace overlap {

// Malformed arguments or violated preconditions.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A construction produced something it must not; always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A configured limit was hit (fresh ordinals, structure caps).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or ill-typed input documents.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Diagnostic {
  std::string clause;
  std::string message;
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

}  // namespace overlap
