#pragma once

#include <stdexcept>
#include <string>

namespace magicsq {

// Failure categories surfaced by the library. Names follow the conditions
// they signal, not the call site that raised them.
enum class errc {
    non_square,
    not_hermitian,
    shape_mismatch,
    dependent_input,
    not_rank_one,
    malformed_grid,
    invalid_qls,
    interior_size_mismatch,
    not_orthonormal,
    size_mismatch,
    not_povm,
    bases_commute,
    bad_size,
    not_doubly_stochastic,
    matching_failed,
    precondition_failed,
    too_large,
    non_qms_input,
    isometry_sum_violation,
    exterior_size_mismatch,
    not_isometry,
    parse_error,
    io_error,
};

const char* errc_name(errc code);

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) {
    throw error(code, msg);
}

} // namespace magicsq
