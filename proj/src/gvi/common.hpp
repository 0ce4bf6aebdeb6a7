#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gvi {

using cplx = std::complex<double>;

enum class ErrorCode {
    invalid_argument,
    shape_mismatch,
    grid_mismatch,
    domain,
    not_elliptic,
    assumption_failed,
    k_too_large,
    no_convergence,
    norm_escape,
    index_out_of_range,
    step_rejected,
    continuation_lost,
    no_candidate,
    config,
    io,
};

const char* error_code_name(ErrorCode code);

// Which growth-rate formulas apply to the frozen symbol.
enum class RateCase { GENERAL, SEMISIMPLE, MAXIMAL };

const char* rate_case_name(RateCase c);
RateCase rate_case_from_name(const std::string& name);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool cond, ErrorCode code, const char* what) {
    if (!cond) fail(code, what);
}

// FNV-1a, stable across platforms; used for manifest hashes.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

}  // namespace gvi
