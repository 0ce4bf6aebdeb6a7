#include "gvi/common.hpp"

#include <cstdint>
#include <cstdio>

namespace gvi {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_argument: return "INVALID_ARGUMENT";
    case ErrorCode::shape_mismatch: return "SHAPE_MISMATCH";
    case ErrorCode::grid_mismatch: return "GRID_MISMATCH";
    case ErrorCode::domain: return "DOMAIN";
    case ErrorCode::not_elliptic: return "NOT_ELLIPTIC";
    case ErrorCode::assumption_failed: return "ASSUMPTION_FAILED";
    case ErrorCode::k_too_large: return "K_TOO_LARGE";
    case ErrorCode::no_convergence: return "NO_CONVERGENCE";
    case ErrorCode::norm_escape: return "NORM_ESCAPE";
    case ErrorCode::index_out_of_range: return "INDEX_OUT_OF_RANGE";
    case ErrorCode::step_rejected: return "STEP_REJECTED";
    case ErrorCode::continuation_lost: return "CONTINUATION_LOST";
    case ErrorCode::no_candidate: return "NO_CANDIDATE";
    case ErrorCode::config: return "CONFIG";
    case ErrorCode::io: return "IO";
    }
    return "UNKNOWN";
}

const char* rate_case_name(RateCase c) {
    switch (c) {
    case RateCase::GENERAL: return "GENERAL";
    case RateCase::SEMISIMPLE: return "SEMISIMPLE";
    case RateCase::MAXIMAL: return "MAXIMAL";
    }
    return "UNKNOWN";
}

RateCase rate_case_from_name(const std::string& name) {
    if (name == "GENERAL") return RateCase::GENERAL;
    if (name == "SEMISIMPLE") return RateCase::SEMISIMPLE;
    if (name == "MAXIMAL") return RateCase::MAXIMAL;
    fail(ErrorCode::config, "unknown rate case " + name);
}

void fail(ErrorCode code, const std::string& what) {
    throw Error(code, std::string(error_code_name(code)) + ": " + what);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace gvi
