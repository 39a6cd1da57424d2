#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

// Configuration file / usage problems (CLI exit code 2).
class config_error : public std::runtime_error {
public:
    config_error(std::string message, int line = 0, std::string key = {})
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) +
                                            (key.empty() ? "" : ", key '" + key + "'") + ": " + message
                                      : message),
          line_(line), key_(std::move(key)) {}
    int line() const { return line_; }
    const std::string& key() const { return key_; }

private:
    int line_;
    std::string key_;
};

// Estimator called with too few events (CLI exit code 4).
class low_statistics_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spdc
