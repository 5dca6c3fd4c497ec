#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smipe {

// Base class for every error the library reports. The CLI maps these to
// exit code 1 (bad input data); anything else is a bug or a usage error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed model, plan, embedding or config file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A domain error tied to a character offset in some input text.
class PositionedError : public Error {
 public:
  PositionedError(const std::string& what, std::size_t position)
      : Error(what + " at offset " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace smipe
