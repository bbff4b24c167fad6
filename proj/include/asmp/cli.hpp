#pragma once

namespace asmp {

// Command-line entry point (run / compare subcommands). Returns the process
// exit status: 0 success, 1 runtime failure, 2 usage or configuration error.
int cli_main(int argc, const char* const* argv);

}  // namespace asmp
