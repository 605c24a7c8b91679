#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace euler41 {

// Malformed or truncated on-disk data (checkpoints, certificates).
// `offset` is the byte position at which the problem was detected,
// or std::string::npos when it does not apply.
class FormatError : public std::runtime_error {
public:
  FormatError(const std::string& what, std::size_t offset = static_cast<std::size_t>(-1))
      : std::runtime_error(what), offset_(offset) {}

  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

// A k-range too large for one candidate bitmap.
class CapacityError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace euler41
