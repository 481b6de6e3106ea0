// Copyright 2026 The hybridcq Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hybridcq {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejected input: dimension mismatch, non-finite value, violated precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The first-order update is invalid for the current state; the caller must shrink dt.
class StepSizeFault : public Error {
 public:
  using Error::Error;
};

/// A jump was requested through a channel whose jump probability is zero.
class ImpossibleJumpFault : public Error {
 public:
  using Error::Error;
};

/// A conditional estimator has no mass to condition on.
class UndefinedMomentFault : public Error {
 public:
  using Error::Error;
};

/// Problem size outside the supported range.
class SizeFault : public Error {
 public:
  using Error::Error;
};

/// A trajectory inside an ensemble failed; carries the identity of the failing stream.
class EngineFault : public Error {
 public:
  EngineFault(std::uint64_t traj_index, std::uint64_t seed, const std::string& cause)
      : Error("trajectory " + std::to_string(traj_index) + " (stream seed " +
              std::to_string(seed) + ") failed: " + cause),
        traj_index_(traj_index),
        seed_(seed) {}

  std::uint64_t traj_index() const noexcept { return traj_index_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t traj_index_;
  std::uint64_t seed_;
};

}  // namespace hybridcq
