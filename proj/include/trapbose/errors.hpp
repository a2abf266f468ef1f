#pragma once

#include <stdexcept>
#include <string>

namespace trapbose {

// Configuration rejection; the message always names the offending section/key.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
    ConfigError(const std::string& section, const std::string& key, const std::string& detail)
        : std::runtime_error("[" + section + "] " + key + ": " + detail) {}
};

} // namespace trapbose
