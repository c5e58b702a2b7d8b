// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace cbir {

/// Base of every error raised by the engine. The CLI maps any Error to exit
/// code 2; everything else that escapes is treated as a usage problem.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents. `row()` is the zero-based record index, or -1
/// when the problem is in a header.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, long row = -1) : Error(what), row_(row) {}
  long row() const noexcept { return row_; }

 private:
  long row_;
};

class ManifestError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

class SplitError : public Error {
 public:
  using Error::Error;
};

class PipelineError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

}  // namespace cbir
