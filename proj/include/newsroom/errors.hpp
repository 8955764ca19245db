#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace newsroom {

// Base for every domain error. `kind()` is a stable machine-parsable name
// (e.g. "SectionNotFound") used in CLI error output and batch reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

} // namespace newsroom
