#pragma once

#include <stdexcept>
#include <string>

namespace srdm {

// std::invalid_argument is used directly for bad call arguments.

/// Input container (directory, manifest split, batch) holds nothing usable.
class EmptyInputError : public std::runtime_error {
 public:
  explicit EmptyInputError(const std::string& what) : std::runtime_error(what) {}
};

/// A sampler precondition fails (too few clips, missing counterpart, ...).
class InsufficientDataError : public std::runtime_error {
 public:
  explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

/// Optimization produced a non-finite loss or gradient.
class DivergedTrainingError : public std::runtime_error {
 public:
  explicit DivergedTrainingError(const std::string& what) : std::runtime_error(what) {}
};

/// Checkpoint file is corrupt, truncated, or has an unsupported version.
class CheckpointError : public std::runtime_error {
 public:
  explicit CheckpointError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace srdm
