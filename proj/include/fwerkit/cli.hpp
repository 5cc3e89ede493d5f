#ifndef FWERKIT_CLI_HPP
#define FWERKIT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fwerkit {

// Runs one invocation. `args` excludes the program name. Data goes to `out`,
// diagnostics to `err`. Returns 0 on success, 1 on input/validation errors
// (nothing is written to `out` in that case), 2 on internal faults.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fwerkit

#endif
