/*
   Copyright 2026 The irf Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace irf {

// Process exit codes used by the command line tool.
enum class ErrorCode : int {
  kGeneric = 1,
  kConfig = 2,
  kConvergence = 3,
  kCapacity = 4,
  kAssertionMissing = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// A map evaluation produced a non-finite value (e.g. negative radicand).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCode::kGeneric, what) {}
};

// Distinguishes configuration failures; all map to exit code 2.
enum class ConfigIssue {
  kInvalid,
  kUnknownFamily,
  kMissingLaw,
  kDimension,
  kMalformedNumber,
  kUnknownKey,
  kProbabilities,
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, ConfigIssue issue = ConfigIssue::kInvalid)
      : Error(ErrorCode::kConfig, what), issue_(issue) {}

  ConfigIssue issue() const noexcept { return issue_; }

 private:
  ConfigIssue issue_;
};

// Iterative procedure did not reach its tolerance; carries the achieved bound.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(ErrorCode::kConvergence, what), achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what)
      : Error(ErrorCode::kCapacity, what) {}
};

class AssertionMissingError : public Error {
 public:
  explicit AssertionMissingError(const std::string& what)
      : Error(ErrorCode::kAssertionMissing, what) {}
};

// Violated precondition of an estimator (wrong regime, bad window, ...).
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorCode::kGeneric, what) {}
};

}  // namespace irf
