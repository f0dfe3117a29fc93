#pragma once

#include <stdexcept>
#include <string>

namespace fairsmote {

// Bad declarative input: config files, run plans, CLI flag combinations.
// CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Bad data at runtime: malformed CSV, violated preconditions on datasets,
// degenerate training sets. CLI maps this to exit code 3.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fairsmote
