#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace grace {

/// Stable error categories. The CLI maps each to a fixed name and exit code.
enum class ErrorCode {
    invalid_argument = 1,
    dimension_mismatch,
    index_out_of_range,
    self_loop,
    negative_weight,
    duplicate_edge,
    zero_variance,
    singular_matrix,
    non_finite,
    empty_path,
    parse_error,
    io_error,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace grace
