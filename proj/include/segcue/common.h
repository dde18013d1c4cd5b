// Copyright 2026 The segcue Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEGCUE_COMMON_H_
#define SEGCUE_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace segcue {

using TokenId = std::int32_t;

// One flag per phoneme; element k refers to the phoneme at 0-based index k
// (1-based position k + 1). A set flag means a word boundary precedes it.
using BoundaryVector = std::vector<std::uint8_t>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (CLI exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid parameters or configuration (CLI exit code 1).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace segcue

#endif  // SEGCUE_COMMON_H_
