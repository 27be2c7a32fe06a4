#pragma once

#include <iosfwd>

namespace obslab::lab {

// Command-line front end; returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace obslab::lab
