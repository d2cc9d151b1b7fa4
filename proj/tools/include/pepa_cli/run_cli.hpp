#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pepa_cli {

// Runs one command line (without the program name) against the given
// streams. Exit codes: 0 positive outcome, 1 negative outcome (invalid,
// unrelated, insecure, disagreement), 2 usage problems, 3 analysis errors
// (incomplete model, state cap, reducible chain, bad battery).
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace pepa_cli
