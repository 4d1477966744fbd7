#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dpg {

enum class ErrorCode {
    InvalidArgument,
    Unsupported,
    Parse,
    NonManifold,
    InvertedElement,
    Singular,
    NotSpd,
    NotConverged,
    Io,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable category next to the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by the sparse factorization when a pivot is not positive.
class NotSpdError : public Error {
public:
    NotSpdError(long pivot, const std::string& what)
        : Error(ErrorCode::NotSpd, what), pivot_(pivot) {}

    long pivot() const noexcept { return pivot_; }

private:
    long pivot_;
};

#define DPG_THROW_IF(cond, code, msg)                 \
    do {                                              \
        if (cond) throw ::dpg::Error((code), (msg));  \
    } while (0)

}  // namespace dpg
