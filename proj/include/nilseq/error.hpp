#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nilseq {

/// Failure categories raised by the library. Each maps to a stable name that
/// the CLI reports in its machine-readable error JSON.
enum class errc {
    not_in_gl,
    not_unipotent,
    non_closed_product,
    generator_conflict,
    parse_error,
    limit_too_large,
    unbounded_sequence,
    degree_zero,
    arity_mismatch,
    mismatch_at,
    dimension_mismatch,
    not_compatible,
    degree_bound_exceeded,
    not_unit_vector,
    not_rational,
    not_diagonal,
    io_error,
    invalid_argument,
};

constexpr std::string_view to_string(errc code) noexcept
{
    switch (code) {
    case errc::not_in_gl: return "NotInGL";
    case errc::not_unipotent: return "NotUnipotent";
    case errc::non_closed_product: return "NonClosedProduct";
    case errc::generator_conflict: return "GeneratorConflict";
    case errc::parse_error: return "ParseError";
    case errc::limit_too_large: return "LimitTooLarge";
    case errc::unbounded_sequence: return "UnboundedSequence";
    case errc::degree_zero: return "DegreeZero";
    case errc::arity_mismatch: return "ArityMismatch";
    case errc::mismatch_at: return "MismatchAt";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::not_compatible: return "NotCompatible";
    case errc::degree_bound_exceeded: return "DegreeBoundExceeded";
    case errc::not_unit_vector: return "NotUnitVector";
    case errc::not_rational: return "NotRational";
    case errc::not_diagonal: return "NotDiagonal";
    case errc::io_error: return "IoError";
    case errc::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace nilseq
