#pragma once

#include <stdexcept>
#include <string>

namespace pclass {

enum class errc {
    dimension_mismatch,
    invalid_module,
    zero_vector,
    infinite_j,
    backend_failure,
    not_in_span,
    unsupported_configuration,
    a_pth_power,
    precision_exhausted,
    norm_not_one,
    resolvent_vanished,
    not_in_intersection,
    precondition_violated,
    assembly_failed,
    invalid_place,
    mixed_p,
    infinite_profile,
    parse_error,
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

    // errors that a caller may cure by rebuilding the context at higher precision
    bool retryable() const {
        return code_ == errc::precision_exhausted || code_ == errc::resolvent_vanished;
    }

private:
    errc code_;
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::invalid_module: return "InvalidModule";
    case errc::zero_vector: return "ZeroVector";
    case errc::infinite_j: return "InfiniteJ";
    case errc::backend_failure: return "BackendFailure";
    case errc::not_in_span: return "NotInSpan";
    case errc::unsupported_configuration: return "UnsupportedConfiguration";
    case errc::a_pth_power: return "APthPower";
    case errc::precision_exhausted: return "PrecisionExhausted";
    case errc::norm_not_one: return "NormNotOne";
    case errc::resolvent_vanished: return "ResolventVanished";
    case errc::not_in_intersection: return "NotInIntersection";
    case errc::precondition_violated: return "PreconditionViolated";
    case errc::assembly_failed: return "AssemblyFailed";
    case errc::invalid_place: return "InvalidPlace";
    case errc::mixed_p: return "MixedP";
    case errc::infinite_profile: return "InfiniteProfile";
    case errc::parse_error: return "ParseError";
    }
    return "Error";
}

[[noreturn]] inline void fail(errc code, const std::string& what) {
    throw error(code, std::string(errc_name(code)) + ": " + what);
}

} // namespace pclass
