#include "grace/error.hpp"

namespace grace {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::dimension_mismatch: return "dimension_mismatch";
        case ErrorCode::index_out_of_range: return "index_out_of_range";
        case ErrorCode::self_loop: return "self_loop";
        case ErrorCode::negative_weight: return "negative_weight";
        case ErrorCode::duplicate_edge: return "duplicate_edge";
        case ErrorCode::zero_variance: return "zero_variance";
        case ErrorCode::singular_matrix: return "singular_matrix";
        case ErrorCode::non_finite: return "non_finite";
        case ErrorCode::empty_path: return "empty_path";
        case ErrorCode::parse_error: return "parse_error";
        case ErrorCode::io_error: return "io_error";
    }
    return "unknown";
}

}  // namespace grace
