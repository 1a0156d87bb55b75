#pragma once

#include <string>
#include <vector>

namespace aoii::cli {

// Command-line front end. `args` is the full argument list without the
// program name, e.g. {"analyze", "--config", "exp.json", "--out", "res"}.
// Returns the process exit code: 0 on success, 1 on validation/config
// errors, 2 on degenerate-policy errors (reducible sync chain, no feasible
// policy). Errors also print one machine-parsable line on `err`.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

// Convenience overload writing to std::cout / std::cerr.
int run(const std::vector<std::string> &args);

} // namespace aoii::cli
