// Copyright 2026 The pano360 Authors
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

namespace pano {

/// Base of every error raised by the library. The CLI maps subclasses to
/// exit codes: UsageError -> 2, everything else -> 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "error"; }
};

#define PANO_DEFINE_ERROR(Name, tag)                              \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what) : Error(what) {}       \
    const char* kind() const noexcept override { return tag; }    \
  }

PANO_DEFINE_ERROR(BoundsError, "bounds");
PANO_DEFINE_ERROR(InvalidDirectionError, "invalid_direction");
PANO_DEFINE_ERROR(InvalidArgumentError, "invalid_argument");
PANO_DEFINE_ERROR(DataError, "data");
PANO_DEFINE_ERROR(ShapeError, "shape");
PANO_DEFINE_ERROR(ContractError, "contract");
PANO_DEFINE_ERROR(IngestionError, "ingestion");
PANO_DEFINE_ERROR(DegeneratePointError, "degenerate_point");
PANO_DEFINE_ERROR(UsageError, "usage");

#undef PANO_DEFINE_ERROR

}  // namespace pano
