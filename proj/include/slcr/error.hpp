#pragma once

#include <stdexcept>
#include <string>

namespace slcr {

// Every failure carries a stable kebab-case code (e.g. "zero-a-rejected")
// alongside the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

}  // namespace slcr
