#pragma once
#include <iosfwd>

namespace sftlab {

// Full command-line front end; returns the process exit code
// (0 ok, 1 usage, 2 assertion/tolerance failure, 3 budget exceeded).
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace sftlab
