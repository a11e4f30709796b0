#pragma once

#include <stdexcept>
#include <string>

namespace stgenus {

/// Failure categories surfaced by the library.  Every precondition violation
/// throws an Error carrying one of these codes; the CLI maps codes to exit
/// statuses (invalid input -> 2, exhausted search budget -> 3, I/O -> 4,
/// anything signalling a broken internal invariant -> 1).
enum class errc {
    not_squarefree,
    value_out_of_range,
    not_coprime,
    invalid_place,
    zero_argument,
    invalid_discriminant,
    overlap,
    dimension_mismatch,
    not_independent,
    ramified_in_governing,
    not_fundamental,
    invalid_range,
    budget_exhausted,
    verification_failed,
    io_error,
    internal_check
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::not_squarefree:        return "NotSquarefree";
        case errc::value_out_of_range:    return "ValueOutOfRange";
        case errc::not_coprime:           return "NotCoprime";
        case errc::invalid_place:         return "InvalidPlace";
        case errc::zero_argument:         return "ZeroArgument";
        case errc::invalid_discriminant:  return "InvalidDiscriminant";
        case errc::overlap:               return "OverlapError";
        case errc::dimension_mismatch:    return "DimensionMismatch";
        case errc::not_independent:       return "NotIndependent";
        case errc::ramified_in_governing: return "RamifiedInGoverning";
        case errc::not_fundamental:       return "NotFundamental";
        case errc::invalid_range:         return "InvalidRange";
        case errc::budget_exhausted:      return "BudgetExhausted";
        case errc::verification_failed:   return "VerificationFailed";
        case errc::io_error:              return "IoError";
        case errc::internal_check:        return "InternalCheck";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

namespace detail {
[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) fail(code, what);
}
}  // namespace detail

}  // namespace stgenus
