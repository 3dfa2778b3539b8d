#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fanostat {

/// Machine-readable error families. The CLI maps each one to a distinct exit code.
enum class ErrorCategory {
    kInvalidArgument,
    kConfig,
    kParse,
    kIo,
    kNumerical,
};

std::string_view category_name(ErrorCategory category) noexcept;
int exit_code(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& message) {
    throw Error(category, message);
}

inline void require(bool condition, const std::string& message) {
    if (!condition) fail(ErrorCategory::kInvalidArgument, message);
}

}  // namespace fanostat
