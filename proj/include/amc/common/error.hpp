#pragma once

#include <stdexcept>
#include <string>

namespace amc {

// Tensor extents or layer dimensions do not agree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An argument is outside its documented domain (label out of range, bad bit count, ...).
class ValueError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A binary file is readable but malformed.
class FormatError : public std::runtime_error {
 public:
  enum class Kind { BadMagic, BadVersion, Truncated, Invalid };

  FormatError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace amc
