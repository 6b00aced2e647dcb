#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acrnn {

// Exit-code buckets used by the CLI. Distinct nonzero codes per failure class.
enum class ErrorClass { internal = 1, config = 2, data = 3, numeric = 4 };

struct Error : std::runtime_error {
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), error_class(cls) {}
  ErrorClass error_class;
};

// --- config-class errors ---------------------------------------------------

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorClass::config, what) {}
};

struct InvalidStride : ConfigError {
  explicit InvalidStride(const std::string& what) : ConfigError(what) {}
};

struct ArchMismatch : ConfigError {
  explicit ArchMismatch(const std::string& what) : ConfigError(what) {}
};

// --- data-class errors -----------------------------------------------------

struct DataError : Error {
  explicit DataError(const std::string& what) : Error(ErrorClass::data, what) {}
};

struct InsufficientFrames : DataError {
  explicit InsufficientFrames(const std::string& what) : DataError(what) {}
};

struct EmptyDataset : DataError {
  explicit EmptyDataset(const std::string& what) : DataError(what) {}
};

struct ParseError : DataError {
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_number(line) {}
  std::size_t line_number;
};

struct CsvError : DataError {
  explicit CsvError(const std::string& what) : DataError(what) {}
};

struct IoError : DataError {
  explicit IoError(const std::string& what) : DataError(what) {}
};

struct CheckpointError : DataError {
  explicit CheckpointError(const std::string& what) : DataError(what) {}
};

struct UnsupportedChannel : DataError {
  explicit UnsupportedChannel(const std::string& what) : DataError(what) {}
};

struct RefusedEmpty : DataError {
  explicit RefusedEmpty(const std::string& what) : DataError(what) {}
};

// --- numeric-class errors --------------------------------------------------

struct NumericError : Error {
  explicit NumericError(const std::string& what) : Error(ErrorClass::numeric, what) {}
};

struct NonFiniteError : NumericError {
  explicit NonFiniteError(const std::string& what) : NumericError(what) {}
};

struct DivergenceError : NumericError {
  DivergenceError(std::size_t frame, const std::string& what)
      : NumericError("frame " + std::to_string(frame) + ": " + what), frame_index(frame) {}
  std::size_t frame_index;
};

// --- contract/internal errors ----------------------------------------------

struct ShapeError : Error {
  explicit ShapeError(const std::string& what) : Error(ErrorClass::internal, what) {}
};

struct ContractError : Error {
  explicit ContractError(const std::string& what) : Error(ErrorClass::internal, what) {}
};

}  // namespace acrnn
