#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nullest/types.hpp"

namespace nullest::cli {

// Stable process exit codes.
enum ExitCode : int {
    kOk = 0,
    kParse = 2,             // usage error, malformed input, spec or override
    kNotIdentifiable = 3,   // k >= n/2
    kEstimatorFailure = 4,  // an estimator failed on valid input
    kVerifyFailed = 5,      // lower-bound verification failed
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// Arguments exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Newline-delimited reals; blank lines and lines starting with '#' are
// skipped. Throws InvalidArgument naming the first malformed line.
std::vector<double> parse_values(std::istream& in);

}  // namespace nullest::cli
