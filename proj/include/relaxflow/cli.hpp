#pragma once

#include <iosfwd>

namespace relaxflow {

// Exit codes: 0 success, 1 usage error, 2 numerical failure.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

}  // namespace relaxflow
