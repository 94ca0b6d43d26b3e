// Copyright 2026 The manifold-jko Authors
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

#ifndef MJKO_ERROR_HPP_
#define MJKO_ERROR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mjko {

enum class ErrorKind {
  kDomain,
  kCutLocus,
  kNondifferentiable,
  kStagnation,
  kConfig,
  kSize,
  kInternal,
  kIo,
};

const char* ErrorKindName(ErrorKind kind);

// Base of every exception thrown by the library. The C API maps `kind()` onto
// its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorKind::kDomain, what) {}
};

// A pair of points is at (or within the cut threshold of) the cut locus.
// `first`/`second` index the offending atoms when the caller knows them.
class CutLocusError : public Error {
 public:
  CutLocusError(const std::string& what, std::optional<std::size_t> first = {},
                std::optional<std::size_t> second = {},
                std::optional<std::size_t> step = {})
      : Error(ErrorKind::kCutLocus, what),
        first_(first),
        second_(second),
        step_(step) {}

  std::optional<std::size_t> first() const { return first_; }
  std::optional<std::size_t> second() const { return second_; }
  std::optional<std::size_t> step() const { return step_; }

 private:
  std::optional<std::size_t> first_;
  std::optional<std::size_t> second_;
  std::optional<std::size_t> step_;
};

class NondifferentiableError : public Error {
 public:
  explicit NondifferentiableError(const std::string& what)
      : Error(ErrorKind::kNondifferentiable, what) {}
};

class StagnationError : public Error {
 public:
  explicit StagnationError(const std::string& what)
      : Error(ErrorKind::kStagnation, what) {}
};

// Configuration problem; `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(ErrorKind::kConfig, field + ": " + what),
        field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class SizeError : public Error {
 public:
  explicit SizeError(const std::string& what) : Error(ErrorKind::kSize, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what)
      : Error(ErrorKind::kInternal, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

}  // namespace mjko

#endif  // MJKO_ERROR_HPP_
