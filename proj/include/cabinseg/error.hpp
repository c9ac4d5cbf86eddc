#pragma once

#include <stdexcept>
#include <string>

namespace cabinseg {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// File missing, unreadable, or unwritable.
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

/// Malformed or unsupported file content.
struct FormatError : Error {
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

/// Invalid parameter or configuration value.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Grids that should share dimensions do not.
struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// Operation requires a different channel count.
struct ChannelError : Error {
    explicit ChannelError(const std::string& msg) : Error(msg) {}
};

/// Region statistics are undefined because the level set covers
/// everything or nothing; curve evolution cannot continue.
struct DegenerateRegion : Error {
    explicit DegenerateRegion(const std::string& msg) : Error(msg) {}
};

}  // namespace cabinseg
