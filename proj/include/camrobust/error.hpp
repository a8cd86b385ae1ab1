// Copyright 2026 The camrobust Authors. All Rights Reserved.
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

#pragma once

#include <stdexcept>
#include <string>

namespace camrobust {

// Base for every error raised by the library. Callers that only care about
// success/failure catch this; the subclasses let the CLI map failures to
// messages and exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable or malformed file content (PNG/JPEG/JSON/CSV).
class DecodeError : public Error {
 public:
  using Error::Error;
};

// Output could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Two buffers that must agree in shape do not.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Unknown factor name, noise kind, override key, or out-of-range severity.
class CatalogError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid input data (panoptic ids, empty joins, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Statistic undefined on the given data (constant series, empty list).
class UndefinedStatistic : public Error {
 public:
  using Error::Error;
};

}  // namespace camrobust
