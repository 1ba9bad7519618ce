// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace citeneed {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or insufficient input data: I/O failures, malformed files, schema
/// mismatches, corpora that cannot satisfy a request. The CLI maps these to
/// exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Tensor extents that do not fit the operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// NaN or Inf reached a public numeric operation.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A model was asked to do something its variant does not support.
class VariantError : public Error {
 public:
  using Error::Error;
};

/// Unreadable, corrupt or incompatible checkpoint file.
class CheckpointError : public DataError {
 public:
  using DataError::DataError;
};

/// A need checkpoint opened as a reason model, or the reverse.
class CheckpointKindError : public CheckpointError {
 public:
  using CheckpointError::CheckpointError;
};

}  // namespace citeneed
