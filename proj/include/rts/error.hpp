#pragma once

#include <stdexcept>

namespace rts {

/// Invalid user-supplied configuration (bad dimensions, rates out of range, ...).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem failure while reading or writing artifacts.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Internal bookkeeping violation; aborts the affected run.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config = 2;
inline constexpr int io = 3;
inline constexpr int invariant = 4;
}  // namespace exit_code

}  // namespace rts
