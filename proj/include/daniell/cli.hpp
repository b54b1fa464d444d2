#pragma once

#include "daniell/quadrature.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace daniell {

/// Outcome of one CLI run. Empty optionals serialize as null.
struct RunResult {
    complex_t value;
    std::optional<double> lower;
    std::optional<double> upper;
    std::optional<double> abs_error_bound;
    std::optional<std::string> classification;
    std::uint64_t evaluations = 0;
    std::optional<double> wall_time;  // seconds; null in serial mode
};

/// One-line JSON: value {re, im}, lower, upper, abs_error_bound, classification, evaluations, wall_time.
std::string to_json_text(const RunResult& r);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 2;
inline constexpr int numeric = 3;
inline constexpr int resource = 4;
}  // namespace exit_code

/**
 * Runs one subcommand (args exclude the program name): integrate, bracket,
 * improper, laplace, fourier, surface, jacobian, coarea, potential, tile,
 * detcheck, classic, selftest. Returns the process exit code.
 */
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace daniell
