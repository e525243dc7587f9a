#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qdeform {

/// Session-wide configuration shared by every subcommand; validated against
/// the quantum-group parameter invariants before any computation runs.
struct SessionConfig {
    int n = 2;
    long ell = 2;
    long y = 0;
    long z = 1;
    bool restricted = false;
    int height_bound = 0;  // 0: default bound
    int maxdeg = 4;
    int working_order = 8;
    std::string output_format = "text";  // "text" or "json"
    std::string output_path;             // empty: stdout
};

/// Dispatches {build, nf, pair, gram, relprime, twist, algebra, deform,
/// verify}.  Exit codes: 0 all checks pass, 1 a check failed, 2 usage or
/// configuration error.  Output is byte-deterministic for fixed inputs.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdeform
