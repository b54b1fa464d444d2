#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace daniell {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0.0;
    double limit_seconds = 0.0;  // wall-clock budget; exceeding it fails the criterion
    std::string detail;
};

/**
 * Runs the eight acceptance criteria at their pinned tolerances and prints
 * one PASS/FAIL line per criterion. quick shrinks the random instance counts
 * and skips the Poisson criterion.
 */
std::vector<CriterionResult> run_acceptance(bool quick, std::ostream& out);

}  // namespace daniell
