#pragma once

#include <stdexcept>

namespace memabs {

/// Thrown when a computation would exceed a configured resource cap
/// (sample volume, unroll support size, lifted state count).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown on malformed configuration input; the message carries the
/// offending file/line or key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown on filesystem failures and unreadable artifact files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace memabs
